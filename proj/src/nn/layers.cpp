#include "gsac/nn/layers.hpp"

#include <cmath>
#include <string>

#include "gsac/error.hpp"

namespace gsac::nn {

namespace {

Tensor glorot(std::size_t rows, std::size_t cols, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Tensor t(rows, cols);
    for (double& v : t.data()) v = uniform(rng, -bound, bound);
    return t;
}

}  // namespace

Var Linear::forward(const Var& x) const { return add_bias(matmul(x, weight), bias); }

Linear make_linear(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
    return {parameter(glorot(in_dim, out_dim, in_dim, out_dim, rng)), parameter(Tensor(1, out_dim))};
}

Mlp::Mlp(std::vector<Linear> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ComputeError("mlp needs at least one layer");
    for (std::size_t i = 1; i < layers_.size(); ++i) {
        if (layers_[i].in_dim() != layers_[i - 1].out_dim()) {
            throw ComputeError("mlp layer " + std::to_string(i) + " input width does not match previous output");
        }
    }
}

Mlp Mlp::make(std::span<const std::size_t> widths, Rng& rng) {
    if (widths.size() < 2) throw ComputeError("mlp needs at least input and output widths");
    std::vector<Linear> layers;
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) layers.push_back(make_linear(widths[i], widths[i + 1], rng));
    return Mlp(std::move(layers));
}

Var Mlp::forward(const Var& x) const {
    Var h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (h->value.cols() != layers_[i].in_dim()) {
            throw ComputeError("mlp layer " + std::to_string(i) + ": expected input width " +
                               std::to_string(layers_[i].in_dim()) + ", got " + std::to_string(h->value.cols()));
        }
        h = layers_[i].forward(h);
        if (i + 1 < layers_.size()) h = relu(h);
    }
    return h;
}

std::vector<Var> Mlp::parameters() const {
    std::vector<Var> out;
    for (const auto& l : layers_) {
        out.push_back(l.weight);
        out.push_back(l.bias);
    }
    return out;
}

GatLayer::GatLayer(GatConfig config, Var weight, Var att_src, Var att_dst)
    : config_(config), weight_(std::move(weight)), att_src_(std::move(att_src)), att_dst_(std::move(att_dst)) {
    const std::size_t width = config_.heads * config_.head_dim;
    if (weight_->value.rows() != config_.in_dim || weight_->value.cols() != width ||
        att_src_->value.rows() != config_.heads || att_src_->value.cols() != config_.head_dim ||
        att_dst_->value.rows() != config_.heads || att_dst_->value.cols() != config_.head_dim) {
        throw ComputeError("gat layer parameter shapes do not match its config");
    }
    if (!(config_.dropout >= 0.0 && config_.dropout < 1.0)) throw ComputeError("gat dropout must lie in [0, 1)");
}

GatLayer GatLayer::make(const GatConfig& config, Rng& rng) {
    const std::size_t width = config.heads * config.head_dim;
    Var w = parameter(glorot(config.in_dim, width, config.in_dim, width, rng));
    Var as = parameter(glorot(config.heads, config.head_dim, 2 * config.head_dim, 1, rng));
    Var ad = parameter(glorot(config.heads, config.head_dim, 2 * config.head_dim, 1, rng));
    return GatLayer(config, std::move(w), std::move(as), std::move(ad));
}

Var GatLayer::forward(const Var& x, std::span<const Edge> edges, Rng* dropout_rng,
                      std::vector<double>* alpha_out) const {
    if (x->value.rows() == 0) throw ComputeError("gat: empty graph");
    const Var h = matmul(x, weight_);
    std::vector<double> edge_scale;
    if (dropout_rng != nullptr && config_.dropout > 0.0) {
        std::bernoulli_distribution keep(1.0 - config_.dropout);
        const double survivor = 1.0 / (1.0 - config_.dropout);
        edge_scale.resize(edges.size() * config_.heads);
        for (double& s : edge_scale) s = keep(*dropout_rng) ? survivor : 0.0;
    }
    return gat_aggregate(h, att_src_, att_dst_, edges, config_.heads, config_.negative_slope, edge_scale, alpha_out);
}

Adam::Adam(std::vector<Var> params, AdamConfig config) : params_(std::move(params)), config_(config) {
    for (const auto& p : params_) {
        m_.emplace_back(p->value.rows(), p->value.cols());
        v_.emplace_back(p->value.rows(), p->value.cols());
    }
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t k = 0; k < params_.size(); ++k) {
        Node& p = *params_[k];
        const Tensor& g = p.grad_buffer();
        Tensor& m = m_[k];
        Tensor& v = v_[k];
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double gi = g[i] + config_.l2 * p.value[i];
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * gi;
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * gi * gi;
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p.value[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
        }
        p.value.check_finite("adam update");
    }
}

void Adam::zero_grad() { nn::zero_grad(params_); }

}  // namespace gsac::nn

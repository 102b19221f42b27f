#pragma once

#include <span>
#include <string>
#include <vector>

#include "gsac/nn/autograd.hpp"
#include "gsac/random.hpp"

namespace gsac::nn {

/// Affine map y = x W + b with W stored in x out.
struct Linear {
    Var weight;
    Var bias;

    std::size_t in_dim() const { return weight->value.rows(); }
    std::size_t out_dim() const { return weight->value.cols(); }
    Var forward(const Var& x) const;
};

/// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero bias.
Linear make_linear(std::size_t in_dim, std::size_t out_dim, Rng& rng);

/// Stack of Linear layers with ReLU between them; the last layer is linear.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<Linear> layers);
    /// widths = {in, hidden..., out}.
    static Mlp make(std::span<const std::size_t> widths, Rng& rng);

    /// Throws ComputeError naming the first layer whose input width does not match.
    Var forward(const Var& x) const;
    std::vector<Var> parameters() const;
    const std::vector<Linear>& layers() const { return layers_; }
    std::size_t in_dim() const { return layers_.front().in_dim(); }
    std::size_t out_dim() const { return layers_.back().out_dim(); }

private:
    std::vector<Linear> layers_;
};

struct GatConfig {
    std::size_t in_dim = 100;
    std::size_t heads = 10;
    std::size_t head_dim = 10;
    double dropout = 0.8;
    double negative_slope = 0.2;
};

/// One multi-head graph attention layer with per-head linear maps and attention vectors.
class GatLayer {
public:
    GatLayer() = default;
    GatLayer(GatConfig config, Var weight, Var att_src, Var att_dst);
    static GatLayer make(const GatConfig& config, Rng& rng);

    /// Per-node output of width heads * head_dim. With `dropout_rng` set, attention coefficients are
    /// dropped with probability config.dropout (training mode); null means evaluation mode.
    Var forward(const Var& x, std::span<const Edge> edges, Rng* dropout_rng = nullptr,
                std::vector<double>* alpha_out = nullptr) const;
    std::vector<Var> parameters() const { return {weight_, att_src_, att_dst_}; }
    const GatConfig& config() const { return config_; }
    std::size_t out_dim() const { return config_.heads * config_.head_dim; }

private:
    GatConfig config_;
    Var weight_;   // in_dim x heads*head_dim, heads side by side
    Var att_src_;  // heads x head_dim
    Var att_dst_;  // heads x head_dim
};

struct AdamConfig {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// Added to the gradient as l2 * theta before the moment updates.
    double l2 = 0.0;
};

class Adam {
public:
    Adam(std::vector<Var> params, AdamConfig config);

    /// One update from the parameters' accumulated gradients.
    void step();
    void zero_grad();
    long steps() const { return t_; }

private:
    std::vector<Var> params_;
    AdamConfig config_;
    std::vector<Tensor> m_;
    std::vector<Tensor> v_;
    long t_ = 0;
};

}  // namespace gsac::nn

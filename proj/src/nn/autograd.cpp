#include "gsac/nn/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "gsac/error.hpp"

namespace gsac::nn {

namespace {

thread_local bool g_grad_enabled = true;

Var make_result(Tensor value, std::vector<Var> parents, std::function<void(Node&)> fn) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    const bool needs = g_grad_enabled && std::any_of(parents.begin(), parents.end(),
                                                      [](const Var& p) { return p->requires_grad; });
    if (needs) {
        node->requires_grad = true;
        node->parents = std::move(parents);
        node->backward = std::move(fn);
    }
    return node;
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ComputeError(std::string(op) + ": shape mismatch (" + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()) + ")");
    }
}

}  // namespace

Tensor& Node::grad_buffer() {
    if (grad.empty() && !value.empty()) grad = Tensor(value.rows(), value.cols());
    return grad;
}

Var constant(Tensor value) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    return node;
}

Var parameter(Tensor value) {
    auto node = std::make_shared<Node>();
    node->value = std::move(value);
    node->requires_grad = true;
    return node;
}

NoGradGuard::NoGradGuard() : previous_(g_grad_enabled) { g_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { g_grad_enabled = previous_; }

bool grad_enabled() { return g_grad_enabled; }

void backward(const Var& root) {
    if (root->value.size() != 1) throw ComputeError("backward: root must be a scalar");
    if (!root->requires_grad) return;

    std::vector<Node*> order;
    std::unordered_set<Node*> seen;
    std::vector<std::pair<Node*, std::size_t>> stack{{root.get(), 0}};
    seen.insert(root.get());
    while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < node->parents.size()) {
            Node* p = node->parents[next++].get();
            if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
        } else {
            order.push_back(node);
            stack.pop_back();
        }
    }

    root->grad_buffer()[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Node* n = *it;
        if (n->backward && !n->grad.empty()) n->backward(*n);
    }
}

void zero_grad(std::span<const Var> params) {
    for (const auto& p : params) {
        if (!p->grad.empty()) p->grad.fill(0.0);
    }
}

Var matmul(const Var& a, const Var& b) {
    if (a->value.cols() != b->value.rows()) {
        throw ComputeError("matmul: inner dimensions differ (" + std::to_string(a->value.cols()) + " vs " +
                           std::to_string(b->value.rows()) + ")");
    }
    Tensor out(a->value.rows(), b->value.cols());
    gemm_accumulate(a->value, false, b->value, false, out);
    return make_result(std::move(out), {a, b}, [](Node& n) {
        Node& a = *n.parents[0];
        Node& b = *n.parents[1];
        if (a.requires_grad) gemm_accumulate(n.grad, false, b.value, true, a.grad_buffer());
        if (b.requires_grad) gemm_accumulate(a.value, true, n.grad, false, b.grad_buffer());
    });
}

Var add_bias(const Var& x, const Var& bias) {
    if (bias->value.rows() != 1 || bias->value.cols() != x->value.cols()) throw ComputeError("add_bias: shape mismatch");
    Tensor out = x->value;
    for (std::size_t r = 0; r < out.rows(); ++r) {
        for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += bias->value[c];
    }
    return make_result(std::move(out), {x, bias}, [](Node& n) {
        Node& x = *n.parents[0];
        Node& b = *n.parents[1];
        if (x.requires_grad) {
            Tensor& g = x.grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i];
        }
        if (b.requires_grad) {
            Tensor& g = b.grad_buffer();
            for (std::size_t r = 0; r < n.grad.rows(); ++r) {
                for (std::size_t c = 0; c < n.grad.cols(); ++c) g[c] += n.grad(r, c);
            }
        }
    });
}

Var add(const Var& a, const Var& b) {
    require_same_shape(a->value, b->value, "add");
    Tensor out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b->value[i];
    return make_result(std::move(out), {a, b}, [](Node& n) {
        for (auto& p : n.parents) {
            if (!p->requires_grad) continue;
            Tensor& g = p->grad_buffer();
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[i];
        }
    });
}

Var scale(const Var& a, double s) {
    Tensor out = a->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= s;
    return make_result(std::move(out), {a}, [s](Node& n) {
        Tensor& g = n.parents[0]->grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += s * n.grad[i];
    });
}

Var relu(const Var& x) { return leaky_relu(x, 0.0); }

Var leaky_relu(const Var& x, double slope) {
    Tensor out = x->value;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 0.0) out[i] *= slope;
    }
    return make_result(std::move(out), {x}, [slope](Node& n) {
        Node& x = *n.parents[0];
        Tensor& g = x.grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += (x.value[i] > 0.0 ? 1.0 : slope) * n.grad[i];
    });
}

Var dropout(const Var& x, std::span<const double> keep_mask, double rate) {
    if (keep_mask.size() != x->value.size()) throw ComputeError("dropout: mask size mismatch");
    const double keep_scale = 1.0 / (1.0 - rate);
    std::vector<double> factors(keep_mask.size());
    for (std::size_t i = 0; i < factors.size(); ++i) factors[i] = keep_mask[i] * keep_scale;
    Tensor out = x->value;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factors[i];
    return make_result(std::move(out), {x}, [factors = std::move(factors)](Node& n) {
        Tensor& g = n.parents[0]->grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += factors[i] * n.grad[i];
    });
}

Var concat_cols(std::span<const Var> parts) {
    if (parts.empty()) throw ComputeError("concat_cols: no inputs");
    const std::size_t rows = parts.front()->value.rows();
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p->value.rows() != rows) throw ComputeError("concat_cols: row counts differ");
        cols += p->value.cols();
    }
    Tensor out(rows, cols);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < p->value.cols(); ++c) out(r, offset + c) = p->value(r, c);
        }
        offset += p->value.cols();
    }
    return make_result(std::move(out), std::vector<Var>(parts.begin(), parts.end()), [](Node& n) {
        std::size_t offset = 0;
        for (auto& p : n.parents) {
            const std::size_t pc = p->value.cols();
            if (p->requires_grad) {
                Tensor& g = p->grad_buffer();
                for (std::size_t r = 0; r < g.rows(); ++r) {
                    for (std::size_t c = 0; c < pc; ++c) g(r, c) += n.grad(r, offset + c);
                }
            }
            offset += pc;
        }
    });
}

Var select_row(const Var& x, std::size_t r) {
    if (r >= x->value.rows()) throw ComputeError("select_row: index out of range");
    Tensor out = Tensor::row_vector(x->value.row(r));
    return make_result(std::move(out), {x}, [r](Node& n) {
        Tensor& g = n.parents[0]->grad_buffer();
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) += n.grad[c];
    });
}

Var slice_rows(const Var& x, std::size_t begin, std::size_t count) {
    if (begin + count > x->value.rows()) throw ComputeError("slice_rows: range out of bounds");
    const std::size_t cols = x->value.cols();
    const auto first = x->value.data().begin() + static_cast<std::ptrdiff_t>(begin * cols);
    Tensor out(count, cols, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count * cols)));
    return make_result(std::move(out), {x}, [begin](Node& n) {
        Tensor& g = n.parents[0]->grad_buffer();
        const std::size_t offset = begin * g.cols();
        for (std::size_t i = 0; i < n.grad.size(); ++i) g[offset + i] += n.grad[i];
    });
}

Var sum_all(const Var& x) {
    double total = 0.0;
    for (double v : x->value.data()) total += v;
    return make_result(Tensor(1, 1, total), {x}, [](Node& n) {
        Tensor& g = n.parents[0]->grad_buffer();
        for (std::size_t i = 0; i < g.size(); ++i) g[i] += n.grad[0];
    });
}

Var mse(const Var& a, const Var& b) {
    require_same_shape(a->value, b->value, "mse");
    const auto count = static_cast<double>(a->value.size());
    double total = 0.0;
    for (std::size_t i = 0; i < a->value.size(); ++i) {
        const double d = a->value[i] - b->value[i];
        total += d * d;
    }
    return make_result(Tensor(1, 1, total / count), {a, b}, [count](Node& n) {
        Node& a = *n.parents[0];
        Node& b = *n.parents[1];
        const double s = 2.0 * n.grad[0] / count;
        for (std::size_t i = 0; i < a.value.size(); ++i) {
            const double d = a.value[i] - b.value[i];
            if (a.requires_grad) a.grad_buffer()[i] += s * d;
            if (b.requires_grad) b.grad_buffer()[i] -= s * d;
        }
    });
}

Var contrastive_loss(const Var& y1, const Var& y2, bool same_label, double margin) {
    require_same_shape(y1->value, y2->value, "contrastive_loss");
    double d2 = 0.0;
    for (std::size_t i = 0; i < y1->value.size(); ++i) {
        const double d = y1->value[i] - y2->value[i];
        d2 += d * d;
    }
    const bool active = same_label || margin - d2 > 0.0;
    const double loss = same_label ? d2 : std::max(0.0, margin - d2);
    // d(loss)/d(d2) is +1 for similar pairs, -1 inside the margin, 0 once clamped.
    const double sign = same_label ? 1.0 : (active ? -1.0 : 0.0);
    return make_result(Tensor(1, 1, loss), {y1, y2}, [sign](Node& n) {
        if (sign == 0.0) return;
        Node& a = *n.parents[0];
        Node& b = *n.parents[1];
        const double s = 2.0 * sign * n.grad[0];
        for (std::size_t i = 0; i < a.value.size(); ++i) {
            const double d = a.value[i] - b.value[i];
            if (a.requires_grad) a.grad_buffer()[i] += s * d;
            if (b.requires_grad) b.grad_buffer()[i] -= s * d;
        }
    });
}

Var gat_aggregate(const Var& h, const Var& att_src, const Var& att_dst, std::span<const Edge> edges,
                  std::size_t heads, double slope, std::span<const double> edge_scale,
                  std::vector<double>* alpha_out) {
    const std::size_t n_nodes = h->value.rows();
    if (n_nodes == 0) throw ComputeError("gat: empty graph");
    if (heads == 0 || h->value.cols() % heads != 0) throw ComputeError("gat: feature width not divisible by heads");
    const std::size_t dim = h->value.cols() / heads;
    if (att_src->value.rows() != heads || att_src->value.cols() != dim || att_dst->value.rows() != heads ||
        att_dst->value.cols() != dim) {
        throw ComputeError("gat: attention vector shape mismatch");
    }
    const std::size_t n_edges = edges.size();
    if (!edge_scale.empty() && edge_scale.size() != n_edges * heads) throw ComputeError("gat: edge scale size mismatch");
    for (const Edge& e : edges) {
        if (e.source < 0 || e.target < 0 || static_cast<std::size_t>(e.source) >= n_nodes ||
            static_cast<std::size_t>(e.target) >= n_nodes) {
            throw ComputeError("gat: edge endpoint out of range");
        }
    }

    const Tensor& H = h->value;
    const Tensor& As = att_src->value;
    const Tensor& Ad = att_dst->value;
    auto head_dot = [&](const Tensor& att, std::size_t node, std::size_t k) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) acc += att(k, d) * H(node, k * dim + d);
        return acc;
    };

    // Pre-activation scores and softmax per (target, head).
    std::vector<double> pre(n_edges * heads);
    std::vector<double> alpha(n_edges * heads);
    for (std::size_t e = 0; e < n_edges; ++e) {
        const auto i = static_cast<std::size_t>(edges[e].target);
        const auto j = static_cast<std::size_t>(edges[e].source);
        for (std::size_t k = 0; k < heads; ++k) pre[e * heads + k] = head_dot(Ad, i, k) + head_dot(As, j, k);
    }
    for (std::size_t k = 0; k < heads; ++k) {
        std::vector<double> max_score(n_nodes, -std::numeric_limits<double>::infinity());
        std::vector<double> denom(n_nodes, 0.0);
        for (std::size_t e = 0; e < n_edges; ++e) {
            const double p = pre[e * heads + k];
            const double s = p > 0.0 ? p : slope * p;
            auto& m = max_score[static_cast<std::size_t>(edges[e].target)];
            m = std::max(m, s);
        }
        for (std::size_t e = 0; e < n_edges; ++e) {
            const double p = pre[e * heads + k];
            const double s = p > 0.0 ? p : slope * p;
            const auto i = static_cast<std::size_t>(edges[e].target);
            alpha[e * heads + k] = std::exp(s - max_score[i]);
            denom[i] += alpha[e * heads + k];
        }
        for (std::size_t e = 0; e < n_edges; ++e) alpha[e * heads + k] /= denom[static_cast<std::size_t>(edges[e].target)];
    }
    if (alpha_out) *alpha_out = alpha;

    std::vector<double> weight = alpha;
    if (!edge_scale.empty()) {
        for (std::size_t i = 0; i < weight.size(); ++i) weight[i] *= edge_scale[i];
    }

    Tensor out(n_nodes, heads * dim);
    for (std::size_t e = 0; e < n_edges; ++e) {
        const auto i = static_cast<std::size_t>(edges[e].target);
        const auto j = static_cast<std::size_t>(edges[e].source);
        for (std::size_t k = 0; k < heads; ++k) {
            const double w = weight[e * heads + k];
            for (std::size_t d = 0; d < dim; ++d) out(i, k * dim + d) += w * H(j, k * dim + d);
        }
    }

    std::vector<Edge> edge_copy(edges.begin(), edges.end());
    std::vector<double> scale_copy(edge_scale.begin(), edge_scale.end());
    return make_result(
        std::move(out), {h, att_src, att_dst},
        [edge_copy = std::move(edge_copy), scale = std::move(scale_copy), pre = std::move(pre), alpha = std::move(alpha),
         weight = std::move(weight), heads, dim, slope](Node& n) {
            Node& hn = *n.parents[0];
            Node& asn = *n.parents[1];
            Node& adn = *n.parents[2];
            const Tensor& H = hn.value;
            const Tensor& G = n.grad;
            const std::size_t n_edges = edge_copy.size();
            Tensor dH(H.rows(), H.cols());
            Tensor dAs(heads, dim);
            Tensor dAd(heads, dim);

            // d(out_i)/d(weight_e) and the value path h_j.
            std::vector<double> d_alpha(n_edges * heads);
            for (std::size_t e = 0; e < n_edges; ++e) {
                const auto i = static_cast<std::size_t>(edge_copy[e].target);
                const auto j = static_cast<std::size_t>(edge_copy[e].source);
                for (std::size_t k = 0; k < heads; ++k) {
                    double dw = 0.0;
                    const double w = weight[e * heads + k];
                    for (std::size_t d = 0; d < dim; ++d) {
                        dw += G(i, k * dim + d) * H(j, k * dim + d);
                        dH(j, k * dim + d) += w * G(i, k * dim + d);
                    }
                    d_alpha[e * heads + k] = scale.empty() ? dw : dw * scale[e * heads + k];
                }
            }
            // Softmax backward per (target, head).
            std::vector<double> dot(H.rows() * heads, 0.0);
            for (std::size_t e = 0; e < n_edges; ++e) {
                const auto i = static_cast<std::size_t>(edge_copy[e].target);
                for (std::size_t k = 0; k < heads; ++k) {
                    dot[i * heads + k] += alpha[e * heads + k] * d_alpha[e * heads + k];
                }
            }
            for (std::size_t e = 0; e < n_edges; ++e) {
                const auto i = static_cast<std::size_t>(edge_copy[e].target);
                const auto j = static_cast<std::size_t>(edge_copy[e].source);
                for (std::size_t k = 0; k < heads; ++k) {
                    const double ds = alpha[e * heads + k] * (d_alpha[e * heads + k] - dot[i * heads + k]);
                    const double dp = ds * (pre[e * heads + k] > 0.0 ? 1.0 : slope);
                    for (std::size_t d = 0; d < dim; ++d) {
                        dAd(k, d) += dp * H(i, k * dim + d);
                        dAs(k, d) += dp * H(j, k * dim + d);
                        dH(i, k * dim + d) += dp * adn.value(k, d);
                        dH(j, k * dim + d) += dp * asn.value(k, d);
                    }
                }
            }
            auto accumulate = [](Node& p, const Tensor& d) {
                if (!p.requires_grad) return;
                Tensor& g = p.grad_buffer();
                for (std::size_t i = 0; i < g.size(); ++i) g[i] += d[i];
            };
            accumulate(hn, dH);
            accumulate(asn, dAs);
            accumulate(adn, dAd);
        });
}

}  // namespace gsac::nn

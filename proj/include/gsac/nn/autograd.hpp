#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gsac/graphs.hpp"
#include "gsac/nn/tensor.hpp"

namespace gsac::nn {

/// One value in a recorded computation. `backward` reads this node's grad and accumulates into its
/// parents' grads.
struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::shared_ptr<Node>> parents;
    std::function<void(Node&)> backward;
    bool requires_grad = false;

    /// Zero-initialized on first use.
    Tensor& grad_buffer();
};

using Var = std::shared_ptr<Node>;

Var constant(Tensor value);
/// Leaf whose gradient is accumulated by backward().
Var parameter(Tensor value);

/// While alive, operations on the current thread record no tape.
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

bool grad_enabled();

/// Seeds d(root)/d(root) = 1 for a 1x1 root and propagates through the tape in reverse topological order.
void backward(const Var& root);
void zero_grad(std::span<const Var> params);

Var matmul(const Var& a, const Var& b);
/// x (n x d) + bias (1 x d) broadcast over rows.
Var add_bias(const Var& x, const Var& bias);
Var add(const Var& a, const Var& b);
Var scale(const Var& a, double s);
Var relu(const Var& x);
Var leaky_relu(const Var& x, double slope);
/// Inverted dropout with an explicit keep mask (1 keeps, 0 drops); survivors scale by 1/(1-rate).
Var dropout(const Var& x, std::span<const double> keep_mask, double rate);
Var concat_cols(std::span<const Var> parts);
Var select_row(const Var& x, std::size_t r);
/// Rows [begin, begin + count).
Var slice_rows(const Var& x, std::size_t begin, std::size_t count);
Var sum_all(const Var& x);
/// Mean of squared differences over all elements, 1x1.
Var mse(const Var& a, const Var& b);
/// Squared-distance contrastive loss: d2 when same_label, else max(0, margin - d2).
Var contrastive_loss(const Var& y1, const Var& y2, bool same_label, double margin);

/// Multi-head attention aggregation over directed edges. `h` holds the per-node projected features
/// (n x heads*head_dim); att_src/att_dst are heads x head_dim. For every target i and head k the
/// coefficients softmax(LeakyReLU(att_dst_k . h_i,k + att_src_k . h_j,k)) over incoming edges j -> i
/// weight the sources' h_j,k. `edge_scale`, when non-empty, multiplies each coefficient (edge-major,
/// heads per edge) after the softmax and carries the dropout mask. `alpha_out` receives the pre-dropout
/// coefficients in the same layout.
Var gat_aggregate(const Var& h, const Var& att_src, const Var& att_dst, std::span<const Edge> edges,
                  std::size_t heads, double slope, std::span<const double> edge_scale = {},
                  std::vector<double>* alpha_out = nullptr);

}  // namespace gsac::nn

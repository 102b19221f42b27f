#include "gsac/nn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsac/error.hpp"

namespace gsac::nn {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw ComputeError("tensor data length does not match shape");
}

Tensor Tensor::row_vector(std::span<const double> values) {
    return Tensor(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::check_finite(std::string_view what) const {
    for (double v : data_) {
        if (!std::isfinite(v)) throw ComputeError("non-finite value in " + std::string(what));
    }
}

void gemm_accumulate(const Tensor& a, bool transpose_a, const Tensor& b, bool transpose_b, Tensor& out) {
    const std::size_t m = transpose_a ? a.cols() : a.rows();
    const std::size_t k = transpose_a ? a.rows() : a.cols();
    const std::size_t kb = transpose_b ? b.cols() : b.rows();
    const std::size_t n = transpose_b ? b.rows() : b.cols();
    if (k != kb || out.rows() != m || out.cols() != n) throw ComputeError("gemm shape mismatch");

    const double* A = a.data().data();
    const double* B = b.data().data();
    double* C = out.data().data();
    const std::size_t lda = a.cols();
    const std::size_t ldb = b.cols();
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = C + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double av = transpose_a ? A[p * lda + i] : A[i * lda + p];
            if (av == 0.0) continue;
            if (!transpose_b) {
                const double* brow = B + p * ldb;
                for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
            } else {
                for (std::size_t j = 0; j < n; ++j) crow[j] += av * B[j * ldb + p];
            }
        }
    }
}

}  // namespace gsac::nn

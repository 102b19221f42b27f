#pragma once

#include <span>
#include <vector>

#include "gsac/nn/tensor.hpp"

namespace gsac {

/// Mean of a set of projection vectors (each 1 x d). Throws DataError on an empty set or mixed widths.
nn::Tensor siamese_cluster_mean(std::span<const nn::Tensor> outputs);

/// exp(-||y - mu||_2).
double siamese_plausibility(const nn::Tensor& y, const nn::Tensor& mu);

/// Gaussian product-kernel density estimate with a per-dimension Silverman bandwidth.
class Kde {
public:
    /// Throws DataError for fewer than two points, mixed widths, or non-positive weights.
    static Kde fit(std::span<const std::vector<double>> points, std::span<const double> weights = {});
    static Kde fit(std::span<const nn::Tensor> outputs);

    double density(std::span<const double> x) const;
    double log_density(std::span<const double> x) const;
    const std::vector<double>& bandwidth() const { return bandwidth_; }
    std::size_t dim() const { return bandwidth_.size(); }

private:
    std::vector<std::vector<double>> points_;
    std::vector<double> log_weights_;
    std::vector<double> bandwidth_;
};

}  // namespace gsac

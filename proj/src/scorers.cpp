#include "gsac/scorers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gsac/error.hpp"

namespace gsac {

nn::Tensor siamese_cluster_mean(std::span<const nn::Tensor> outputs) {
    if (outputs.empty()) throw DataError("cluster mean of an empty set");
    nn::Tensor mu(1, outputs.front().size());
    for (const auto& y : outputs) {
        if (y.size() != mu.size()) throw DataError("cluster mean: projections differ in width");
        for (std::size_t i = 0; i < mu.size(); ++i) mu[i] += y[i];
    }
    for (double& v : mu.data()) v /= static_cast<double>(outputs.size());
    return mu;
}

double siamese_plausibility(const nn::Tensor& y, const nn::Tensor& mu) {
    if (y.size() != mu.size()) throw ComputeError("siamese plausibility: width mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d2 += (y[i] - mu[i]) * (y[i] - mu[i]);
    return std::exp(-std::sqrt(d2));
}

Kde Kde::fit(std::span<const std::vector<double>> points, std::span<const double> weights) {
    if (points.size() < 2) throw DataError("kde needs at least two points");
    if (!weights.empty() && weights.size() != points.size()) throw DataError("kde: one weight per point required");
    const std::size_t d = points.front().size();
    if (d == 0) throw DataError("kde: zero-dimensional points");
    Kde k;
    k.points_.assign(points.begin(), points.end());
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != d) throw DataError("kde: points differ in dimension");
        const double w = weights.empty() ? 1.0 : weights[i];
        if (!(w > 0.0)) throw DataError("kde: weights must be positive");
        total += w;
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        k.log_weights_.push_back(std::log((weights.empty() ? 1.0 : weights[i]) / total));
    }
    const auto n = static_cast<double>(points.size());
    const double factor = std::pow(4.0 / ((static_cast<double>(d) + 2.0) * n), 1.0 / (static_cast<double>(d) + 4.0));
    k.bandwidth_.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& p : points) mean += p[j];
        mean /= n;
        double var = 0.0;
        for (const auto& p : points) var += (p[j] - mean) * (p[j] - mean);
        const double sd = std::sqrt(var / (n - 1.0));
        // A constant dimension still needs a positive kernel width.
        k.bandwidth_[j] = std::max(sd * factor, 1e-6);
    }
    return k;
}

Kde Kde::fit(std::span<const nn::Tensor> outputs) {
    std::vector<std::vector<double>> pts;
    pts.reserve(outputs.size());
    for (const auto& y : outputs) pts.emplace_back(y.data().begin(), y.data().end());
    return fit(pts);
}

double Kde::log_density(std::span<const double> x) const {
    if (x.size() != dim()) throw ComputeError("kde: query dimension mismatch");
    double log_norm = 0.0;
    for (double h : bandwidth_) log_norm -= std::log(h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> terms(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        double q = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double z = (x[j] - points_[i][j]) / bandwidth_[j];
            q += z * z;
        }
        terms[i] = log_weights_[i] - 0.5 * q;
    }
    const double m = *std::max_element(terms.begin(), terms.end());
    if (m == -std::numeric_limits<double>::infinity()) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return log_norm + m + std::log(s);
}

double Kde::density(std::span<const double> x) const { return std::exp(log_density(x)); }

}  // namespace gsac

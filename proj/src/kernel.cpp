#include "kinreg/kernel.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace kinreg {

namespace {

// exp(-x) underflows to zero beyond this.
constexpr double kNegligibleExponent = 746.0;

void check_dims(std::span<const double> query, const PointSet& centers) {
    if (centers.empty())
        throw DataError("kernel evaluation needs at least one center");
    if (query.size() != centers.dim())
        throw DataError("query dimension " + std::to_string(query.size()) + " does not match centers dimension " +
                        std::to_string(centers.dim()));
}

} // namespace

double shifted_weights(std::span<const double> query, const PointSet& centers, Temperature theta,
                       std::span<double> weights) {
    check_dims(query, centers);
    const std::size_t n = centers.size();
    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        weights[i] = squared_distance(query, centers[i]);
        min_sq = std::min(min_sq, weights[i]);
    }
    const double inv_two_theta = 1.0 / (2.0 * theta.value());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (weights[i] - min_sq) * inv_two_theta;
        weights[i] = e < kNegligibleExponent ? std::exp(-e) : 0.0;
        sum += weights[i];
    }
    return sum;
}

DiscreteDistribution normalized_distribution(std::span<const double> query, const PointSet& centers,
                                             Temperature theta) {
    DiscreteDistribution p(centers.size());
    const double sum = shifted_weights(query, centers, theta, p);
    for (auto& w : p)
        w /= sum;
    return p;
}

double kernel_average(std::span<const double> query, const PointSet& centers, std::span<const double> values,
                      Temperature theta, std::span<double> scratch) {
    const double sum = shifted_weights(query, centers, theta, scratch);
    double acc = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
        acc += values[i] * scratch[i];
    return acc / sum;
}

} // namespace kinreg

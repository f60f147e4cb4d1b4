#ifndef KINREG_KERNEL_HPP
#define KINREG_KERNEL_HPP

#include <span>
#include <vector>

#include "kinreg/types.hpp"

namespace kinreg {

/// Normalized discrete weights P_i, summing to one.
using DiscreteDistribution = std::vector<double>;

/// exp(-sq_dist / (2 theta)). The (2 pi theta)^(-D/2) prefactor is omitted:
/// every consumer either normalizes or takes ratios.
inline double gaussian_unnorm(double sq_dist, Temperature theta) {
    return std::exp(-sq_dist / (2.0 * theta.value()));
}

/// Fills `weights` with exp(-(d_i^2 - min_j d_j^2) / (2 theta)) for the
/// Gaussian centred at `query`; the largest weight is exactly 1. Returns the
/// sum of the weights, which is therefore >= 1.
double shifted_weights(std::span<const double> query, const PointSet& centers, Temperature theta,
                       std::span<double> weights);

/// Zeroth-moment normalized Gaussian weights around `query`, computed with the
/// max-shift so they stay finite in the cold limit.
DiscreteDistribution normalized_distribution(std::span<const double> query, const PointSet& centers,
                                             Temperature theta);

/// sum_i values_i P_i(query) with P normalized.
double kernel_average(std::span<const double> query, const PointSet& centers, std::span<const double> values,
                      Temperature theta, std::span<double> scratch);

} // namespace kinreg

#endif // KINREG_KERNEL_HPP

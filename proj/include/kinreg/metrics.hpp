#ifndef KINREG_METRICS_HPP
#define KINREG_METRICS_HPP

#include <optional>
#include <span>

namespace kinreg {

struct MetricReport {
    double l1_mean = 0.0;
    double rmse = 0.0;             ///< root mean squared error divided by max|truth|
    double linf = 0.0;
    std::optional<double> r2;      ///< empty when the truth has zero variance
    bool rmse_unnormalized = false; ///< set when max|truth| == 0
};

MetricReport compute_metrics(std::span<const double> pred, std::span<const double> truth);

/// The normalized RMSE of compute_metrics alone.
double normalized_rmse(std::span<const double> pred, std::span<const double> truth);

} // namespace kinreg

#endif // KINREG_METRICS_HPP

#include "kinreg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kinreg/types.hpp"

namespace kinreg {

namespace {

void check_lengths(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size() || truth.empty())
        throw DataError("metrics need equal non-zero lengths, got " + std::to_string(pred.size()) + " and " +
                        std::to_string(truth.size()));
}

} // namespace

MetricReport compute_metrics(std::span<const double> pred, std::span<const double> truth) {
    check_lengths(pred, truth);
    const auto n = static_cast<double>(truth.size());
    double abs_sum = 0.0, sq_sum = 0.0, max_abs_err = 0.0, max_abs_truth = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double err = std::abs(pred[i] - truth[i]);
        abs_sum += err;
        sq_sum += err * err;
        max_abs_err = std::max(max_abs_err, err);
        max_abs_truth = std::max(max_abs_truth, std::abs(truth[i]));
        mean += truth[i];
    }
    mean /= n;
    double sst = 0.0;
    for (double t : truth)
        sst += (t - mean) * (t - mean);

    MetricReport m;
    m.l1_mean = abs_sum / n;
    m.linf = max_abs_err;
    m.rmse = std::sqrt(sq_sum / n);
    if (max_abs_truth > 0.0)
        m.rmse /= max_abs_truth;
    else
        m.rmse_unnormalized = true;
    if (sst > 0.0)
        m.r2 = 1.0 - sq_sum / sst;
    return m;
}

double normalized_rmse(std::span<const double> pred, std::span<const double> truth) {
    return compute_metrics(pred, truth).rmse;
}

} // namespace kinreg

#ifndef KINREG_TEMPERATURE_HPP
#define KINREG_TEMPERATURE_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kinreg/dataset.hpp"
#include "kinreg/interpolator.hpp"

namespace kinreg {

struct ThetaSearchConfig {
    double alpha = 0.5;   ///< relaxation of the max-ent update, in (0,1]
    int max_iters = 50;
    double rel_tol = 1e-3;
    int knn_k = 5;
    CorrectionLevel level = CorrectionLevel::SecondMoment;
    SolverConfig solver;
};

enum class StopReason { Converged, SmallStep, MaxIters };
std::string to_string(StopReason reason);

struct ThetaTracePoint {
    double theta;
    double rmse; ///< validation RMSE, normalized by max|phi|
};

struct ThetaSearchResult {
    Temperature theta_opt{1.0};
    std::vector<ThetaTracePoint> trace;
    double d_typ = 0.0;
    StopReason stop_reason = StopReason::MaxIters;

    double best_rmse() const;
};

/// Variance of the inputs, (1/N) sum_i |x_i - mean|^2. Throws DataError when
/// all points coincide.
Temperature theta_initial(const PointSet& points);
inline Temperature theta_initial(const RawDataset& train) { return theta_initial(train.points); }

/// Mean over points of the mean distance to their k nearest neighbours.
double d_typ(const PointSet& points, int k);

/// Relaxed max-ent update
///   alpha (1/N) sum_i |x_i - mean|^2 P_i(mean; theta_prev) + (1 - alpha) theta_prev
/// with P the normalized Gaussian centred on the mean.
Temperature theta_next(const PointSet& points, Temperature theta_prev, double alpha);

/// Candidate sequence driver: walks theta_initial -> theta_next -> ..., asks
/// `validation_rmse` for each candidate and returns the trace argmin.
ThetaSearchResult search_theta_with(const PointSet& train_points, const ThetaSearchConfig& cfg,
                                    const std::function<double(Temperature)>& validation_rmse);

/// Kinetic interpolator at cfg.level, trained on split.train and scored on
/// split.validation.
ThetaSearchResult search_theta(const SplitDataset& split, const ThetaSearchConfig& cfg = {});

/// Validation RMSE of the kinetic interpolator at one temperature.
double validation_rmse(const SplitDataset& split, Temperature theta, CorrectionLevel level,
                       const SolverConfig& solver = {});

struct CgConfig {
    int max_iters = 100;
    double fd_step = 1e-4;  ///< central-difference step in the optimized variable
    double grad_tol = 1e-7;
    double step_tol = 1e-6;
    int max_restarts = 3;
};

struct CgResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    StopReason stop = StopReason::MaxIters;
    std::vector<std::pair<std::vector<double>, double>> iterates;
};

/// Polak-Ribiere nonlinear conjugate gradient with finite-difference
/// gradients. A failed line search halves the trial step repeatedly, then
/// restarts along steepest descent; after `max_restarts` restarts the best
/// point seen is returned.
CgResult minimize_cg(const std::function<double(std::span<const double>)>& objective, std::vector<double> x0,
                     const CgConfig& cfg = {});

/// Minimizes validation RMSE over z = log(theta) with minimize_cg, starting at
/// log(theta_initial).
ThetaSearchResult search_theta_mle(const SplitDataset& split, CorrectionLevel level, const CgConfig& cfg = {},
                                   const SolverConfig& solver = {});

} // namespace kinreg

#endif // KINREG_TEMPERATURE_HPP

#ifndef KINREG_INTERPOLATOR_HPP
#define KINREG_INTERPOLATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kinreg/dataset.hpp"
#include "kinreg/moment_solver.hpp"
#include "kinreg/types.hpp"

namespace kinreg {

/// How much of the moment matching is applied.
///   None         - zeroth moment only (normalized kernel average)
///   FirstMoment  - plus the shifted evaluation point x_tilde
///   SecondMoment - plus the self-corrected training weights psi = 2 phi - phi_hat
enum class CorrectionLevel { None = 0, FirstMoment = 1, SecondMoment = 2 };

std::string to_string(CorrectionLevel level);
CorrectionLevel correction_level_from_int(int level);

/// Fallback counts for the per-point moment solves.
struct FitReport {
    std::size_t n_failed_corrections = 0;
    double max_residual = 0.0;
};

struct PredictReport {
    std::size_t n_queries = 0;
    std::size_t n_failed_corrections = 0;
    double max_residual = 0.0;
};

/// Immutable trained state of the kinetic interpolator.
class FittedModel {
public:
    /// Reassembles a model from stored fields, checking invariants.
    FittedModel(PointSet train_points, std::vector<double> train_values, std::vector<double> psi, Temperature theta,
                CorrectionLevel level, SolverConfig solver_cfg, std::vector<MomentCorrection> self_corrections);

    const PointSet& train_points() const { return train_points_; }
    const std::vector<double>& train_values() const { return train_values_; }
    const std::vector<double>& psi() const { return psi_; }
    Temperature theta() const { return theta_; }
    CorrectionLevel level() const { return level_; }
    const SolverConfig& solver_config() const { return solver_cfg_; }
    /// Per-training-point shifts; filled for SecondMoment only.
    const std::vector<MomentCorrection>& self_corrections() const { return self_corrections_; }
    std::size_t dim() const { return train_points_.dim(); }
    std::size_t size() const { return train_points_.size(); }

    std::vector<double> predict(const PointSet& queries, PredictReport* report = nullptr) const;
    FitReport report() const;

private:
    PointSet train_points_;
    std::vector<double> train_values_;
    std::vector<double> psi_;
    Temperature theta_;
    CorrectionLevel level_;
    SolverConfig solver_cfg_;
    std::vector<MomentCorrection> self_corrections_;
};

/// Trains on normalized data. For SecondMoment every training point is
/// shifted by its own first-moment correction, its value re-predicted from
/// the full training set (itself included), and psi_i = 2 phi_i - phi_hat_i.
/// A failed solve at a training point is counted in the report and that
/// point keeps psi_i = phi_i.
FittedModel fit(const RawDataset& train, Temperature theta, CorrectionLevel level, const SolverConfig& cfg = {});

/// Per query: zero shift for None; otherwise the first-moment shift (zero on
/// solver failure), then sum_i psi_i P_i(x_tilde).
std::vector<double> predict(const FittedModel& model, const PointSet& queries, PredictReport* report = nullptr);

FitReport fit_report(const FittedModel& model);

} // namespace kinreg

#endif // KINREG_INTERPOLATOR_HPP

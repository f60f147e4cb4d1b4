#ifndef KINREG_MOMENT_SOLVER_HPP
#define KINREG_MOMENT_SOLVER_HPP

#include <span>
#include <vector>

#include "kinreg/types.hpp"

namespace kinreg {

struct SolverConfig {
    double tol_resid = 1e-10; ///< bound on |sum_i (x - x_i) w_i| with max weight 1
    int max_iter = 50;
    double ridge = 1e-12;     ///< relative to trace(A)/D; added to the diagonal when A is singular
};

/// Shift of the kernel centre, x_tilde = x + delta, that restores the first
/// moment sum_i x_i P_i(x_tilde) = x.
struct MomentCorrection {
    std::vector<double> delta;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Result of one linearized update at the current evaluation point.
struct MomentStep {
    std::vector<double> residual; ///< sum_i (x - x_i) w_i(x_tilde), max-shifted weights
    std::vector<double> step;     ///< solution of A step = residual; empty when A is singular
};

/// Builds A_{ak} = (1/theta) sum_i (x_a - x_{a,i}) (xt_k - x_{k,i}) w_i and the
/// residual at `x_tilde`, then solves for the update. The weights are the
/// unnormalized Gaussians rescaled by a common factor so the largest is one;
/// neither the root nor the update depends on that factor.
MomentStep first_moment_step(std::span<const double> query, std::span<const double> x_tilde,
                             const PointSet& centers, Temperature theta, double ridge,
                             std::span<double> scratch);

/// Iterates first_moment_step from x_tilde = x. Reusable across queries that
/// share the same centers.
class FirstMomentSolver {
public:
    explicit FirstMomentSolver(const PointSet& centers, SolverConfig cfg = {});

    MomentCorrection solve(std::span<const double> query, Temperature theta) const;
    MomentCorrection solve(std::span<const double> query, Temperature theta, std::span<double> scratch) const;

    const SolverConfig& config() const { return cfg_; }
    double diameter() const { return diameter_; }

private:
    const PointSet* centers_;
    SolverConfig cfg_;
    double diameter_ = 0.0;
};

/// On failure (singular system, NaN, divergence, iteration cap) the result has
/// converged == false and delta holds the last finite iterate; callers are
/// expected to fall back to a zero shift.
MomentCorrection solve_first_moment(std::span<const double> query, const PointSet& centers, Temperature theta,
                                    const SolverConfig& cfg = {});

/// Solves the square system A y = b, A given row-major. Throws NumericalError
/// when A is rank deficient or not finite.
std::vector<double> solve_dense(std::span<const double> a, std::span<const double> b);

} // namespace kinreg

#endif // KINREG_MOMENT_SOLVER_HPP

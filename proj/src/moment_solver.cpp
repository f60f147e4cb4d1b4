#include "kinreg/moment_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace kinreg {

namespace {

constexpr double kNegligibleExponent = 746.0;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

std::vector<double> solve_dense(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    if (a.size() != b.size() * b.size())
        throw NumericalError("solve_dense: matrix has " + std::to_string(a.size()) + " entries, expected " +
                             std::to_string(b.size() * b.size()));
    if (!all_finite(a) || !all_finite(b))
        throw NumericalError("solve_dense: non-finite input");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> A(a.data(), n, n);
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < n)
        throw NumericalError("solve_dense: matrix is rank deficient (rank " + std::to_string(lu.rank()) + " of " +
                             std::to_string(n) + ")");
    const Eigen::VectorXd y = lu.solve(rhs);
    return {y.data(), y.data() + n};
}

MomentStep first_moment_step(std::span<const double> query, std::span<const double> x_tilde,
                             const PointSet& centers, Temperature theta, double ridge,
                             std::span<double> scratch) {
    const std::size_t n = centers.size();
    const std::size_t dim = centers.dim();

    double min_sq = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        scratch[i] = squared_distance(x_tilde, centers[i]);
        min_sq = std::min(min_sq, scratch[i]);
    }

    // With a_i = x - x_i and shift = x_tilde - x:
    //   sum_i w_i a_i (x_tilde - x_i)^T = S + r shift^T,  S = sum_i w_i a_i a_i^T.
    MomentStep out;
    out.residual.assign(dim, 0.0);
    std::vector<double> s(dim * dim, 0.0);
    std::vector<double> a(dim);
    const double inv_two_theta = 1.0 / (2.0 * theta.value());
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (scratch[i] - min_sq) * inv_two_theta;
        if (e >= kNegligibleExponent)
            continue;
        const double w = std::exp(-e);
        const auto xi = centers[i];
        for (std::size_t k = 0; k < dim; ++k)
            a[k] = query[k] - xi[k];
        for (std::size_t r = 0; r < dim; ++r) {
            const double wa = w * a[r];
            out.residual[r] += wa;
            for (std::size_t c = r; c < dim; ++c)
                s[r * dim + c] += wa * a[c];
        }
    }

    std::vector<double> matrix(dim * dim);
    double trace = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double sym = r <= c ? s[r * dim + c] : s[c * dim + r];
            matrix[r * dim + c] = (sym + out.residual[r] * (x_tilde[c] - query[c])) / theta.value();
        }
        trace += matrix[r * dim + r];
    }

    // Plain solve first so well-posed systems are untouched; the relative
    // ridge only comes in when A is numerically singular.
    try {
        out.step = solve_dense(matrix, out.residual);
        return out;
    } catch (const NumericalError&) {
    }
    const double boost = ridge * std::abs(trace) / static_cast<double>(dim);
    if (boost > 0.0) {
        for (std::size_t r = 0; r < dim; ++r)
            matrix[r * dim + r] += boost;
        try {
            out.step = solve_dense(matrix, out.residual);
        } catch (const NumericalError&) {
            out.step.clear();
        }
    }
    return out;
}

FirstMomentSolver::FirstMomentSolver(const PointSet& centers, SolverConfig cfg) : centers_(&centers), cfg_(cfg) {
    if (centers.empty())
        throw DataError("first-moment solve needs at least one center");
    std::vector<double> lo(centers.dim(), std::numeric_limits<double>::infinity());
    std::vector<double> hi(centers.dim(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const auto p = centers[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    diameter_ = std::sqrt(squared_distance(lo, hi));
}

MomentCorrection FirstMomentSolver::solve(std::span<const double> query, Temperature theta) const {
    std::vector<double> scratch(centers_->size());
    return solve(query, theta, scratch);
}

MomentCorrection FirstMomentSolver::solve(std::span<const double> query, Temperature theta,
                                          std::span<double> scratch) const {
    const std::size_t dim = centers_->dim();
    if (query.size() != dim)
        throw DataError("query dimension " + std::to_string(query.size()) + " does not match centers dimension " +
                        std::to_string(dim));

    // Steps larger than this leave the region where the linearization is meaningful.
    const double max_step = 10.0 * diameter_;

    MomentCorrection result;
    result.delta.assign(dim, 0.0);
    std::vector<double> x_tilde(query.begin(), query.end());
    for (int k = 0;; ++k) {
        MomentStep step = first_moment_step(query, x_tilde, *centers_, theta, cfg_.ridge, scratch);
        result.iterations = k;
        // Measured with the largest weight equal to one, so the tolerance also
        // bounds |x - normalized mean of the centers|.
        result.residual_norm = norm2(step.residual);
        if (!std::isfinite(result.residual_norm))
            return result;
        if (result.residual_norm <= cfg_.tol_resid) {
            result.converged = true;
            return result;
        }
        if (k >= cfg_.max_iter || step.step.empty() || !all_finite(step.step) || norm2(step.step) > max_step)
            return result;
        for (std::size_t d = 0; d < dim; ++d) {
            x_tilde[d] += step.step[d];
            result.delta[d] = x_tilde[d] - query[d];
        }
    }
}

MomentCorrection solve_first_moment(std::span<const double> query, const PointSet& centers, Temperature theta,
                                    const SolverConfig& cfg) {
    return FirstMomentSolver(centers, cfg).solve(query, theta);
}

} // namespace kinreg

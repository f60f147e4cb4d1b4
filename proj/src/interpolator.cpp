#include "kinreg/interpolator.hpp"

#include <algorithm>
#include <cmath>

#include "kinreg/kernel.hpp"
#include "kinreg/parallel.hpp"

namespace kinreg {

std::string to_string(CorrectionLevel level) {
    switch (level) {
    case CorrectionLevel::None:
        return "none";
    case CorrectionLevel::FirstMoment:
        return "first-moment";
    case CorrectionLevel::SecondMoment:
        return "second-moment";
    }
    return "unknown";
}

CorrectionLevel correction_level_from_int(int level) {
    if (level < 0 || level > 2)
        throw UsageError("correction level must be 0, 1 or 2, got " + std::to_string(level));
    return static_cast<CorrectionLevel>(level);
}

FittedModel::FittedModel(PointSet train_points, std::vector<double> train_values, std::vector<double> psi,
                         Temperature theta, CorrectionLevel level, SolverConfig solver_cfg,
                         std::vector<MomentCorrection> self_corrections)
    : train_points_(std::move(train_points)), train_values_(std::move(train_values)), psi_(std::move(psi)),
      theta_(theta), level_(level), solver_cfg_(solver_cfg), self_corrections_(std::move(self_corrections)) {
    if (train_points_.empty())
        throw DataError("model has no training points");
    if (train_values_.size() != train_points_.size() || psi_.size() != train_points_.size())
        throw DataError("model arrays disagree in length");
    if (level_ != CorrectionLevel::SecondMoment && psi_ != train_values_)
        throw DataError("psi must equal the training values below the second-moment level");
    if (level_ == CorrectionLevel::SecondMoment && self_corrections_.size() != train_points_.size())
        throw DataError("second-moment model needs one self-correction per training point");
}

FittedModel fit(const RawDataset& train, Temperature theta, CorrectionLevel level, const SolverConfig& cfg) {
    train.validate(1);
    std::vector<double> psi = train.values;
    std::vector<MomentCorrection> corrections;

    if (level == CorrectionLevel::SecondMoment) {
        const std::size_t n = train.size();
        const std::size_t dim = train.dim();
        corrections.resize(n);
        const FirstMomentSolver solver(train.points, cfg);
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            std::vector<double> scratch(n);
            std::vector<double> shifted(dim);
            for (std::size_t i = begin; i < end; ++i) {
                const auto xi = train.points[i];
                corrections[i] = solver.solve(xi, theta, scratch);
                // Without the shift the self-prediction carries a first-order
                // bias that queries near x_i do not see; leave psi_i = phi_i.
                if (!corrections[i].converged)
                    continue;
                for (std::size_t k = 0; k < dim; ++k)
                    shifted[k] = xi[k] + corrections[i].delta[k];
                const double self_prediction = kernel_average(shifted, train.points, train.values, theta, scratch);
                psi[i] = 2.0 * train.values[i] - self_prediction;
            }
        });
    }
    return FittedModel(train.points, train.values, std::move(psi), theta, level, cfg, std::move(corrections));
}

std::vector<double> FittedModel::predict(const PointSet& queries, PredictReport* report) const {
    if (queries.dim() != dim() && !queries.empty())
        throw DataError("query dimension " + std::to_string(queries.dim()) + " does not match model dimension " +
                        std::to_string(dim()));
    const std::size_t n = queries.size();
    std::vector<double> out(n);
    std::vector<char> failed(n, 0);
    std::vector<double> residual(n, 0.0);

    if (level_ == CorrectionLevel::None) {
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            std::vector<double> scratch(size());
            for (std::size_t q = begin; q < end; ++q)
                out[q] = kernel_average(queries[q], train_points_, psi_, theta_, scratch);
        });
    } else {
        const FirstMomentSolver solver(train_points_, solver_cfg_);
        parallel_for(n, [&](std::size_t begin, std::size_t end) {
            std::vector<double> scratch(size());
            std::vector<double> shifted(dim());
            for (std::size_t q = begin; q < end; ++q) {
                const auto x = queries[q];
                const MomentCorrection c = solver.solve(x, theta_, scratch);
                failed[q] = c.converged ? 0 : 1;
                residual[q] = c.residual_norm;
                for (std::size_t k = 0; k < dim(); ++k)
                    shifted[k] = x[k] + (c.converged ? c.delta[k] : 0.0);
                out[q] = kernel_average(shifted, train_points_, psi_, theta_, scratch);
            }
        });
    }

    if (report) {
        report->n_queries = n;
        report->n_failed_corrections = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
        report->max_residual = 0.0;
        for (std::size_t q = 0; q < n; ++q)
            if (!failed[q])
                report->max_residual = std::max(report->max_residual, residual[q]);
    }
    return out;
}

FitReport FittedModel::report() const {
    FitReport r;
    for (const auto& c : self_corrections_) {
        if (c.converged)
            r.max_residual = std::max(r.max_residual, c.residual_norm);
        else
            ++r.n_failed_corrections;
    }
    return r;
}

std::vector<double> predict(const FittedModel& model, const PointSet& queries, PredictReport* report) {
    return model.predict(queries, report);
}

FitReport fit_report(const FittedModel& model) { return model.report(); }

} // namespace kinreg

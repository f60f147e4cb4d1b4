#include "kinreg/rbf.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "kinreg/kernel.hpp"
#include "kinreg/metrics.hpp"
#include "kinreg/parallel.hpp"

namespace kinreg {

RbfModel rbf_fit(const RawDataset& train, Temperature theta, double ridge) {
    train.validate(1);
    if (!(ridge >= 0.0))
        throw UsageError("ridge must be non-negative");
    const std::size_t n = train.size();
    const auto en = static_cast<Eigen::Index>(n);

    // The Gram matrix lives in a plain vector so its N^2 footprint is visible
    // to allocation accounting.
    std::vector<double> gram(n * n);
    const Eigen::Map<const Eigen::VectorXd> rhs(train.values.data(), en);

    double min_pivot_ratio = 0.0;
    for (const double attempt : {ridge, std::max(ridge, 1e-10), std::max(ridge, 1e-8)}) {
        for (std::size_t i = 0; i < n; ++i) {
            gram[i * n + i] = 1.0 + attempt;
            for (std::size_t j = 0; j < i; ++j) {
                const double g = gaussian_unnorm(squared_distance(train.points[i], train.points[j]), theta);
                gram[i * n + j] = g;
                gram[j * n + i] = g;
            }
        }
        Eigen::Map<Eigen::MatrixXd> g(gram.data(), en, en);
        Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(g);
        if (llt.info() == Eigen::Success) {
            const auto diag = llt.matrixLLT().diagonal();
            min_pivot_ratio = diag.minCoeff() / diag.maxCoeff();
            if (std::isfinite(min_pivot_ratio) && min_pivot_ratio > 0.0) {
                const Eigen::VectorXd w = llt.solve(rhs);
                if (w.allFinite())
                    return RbfModel{train.points, std::vector<double>(w.data(), w.data() + n), theta, attempt};
            }
        }
    }
    throw NumericalError("RBF Gram matrix factorization failed at theta " + std::to_string(theta.value()) +
                         " even with ridge 1e-8 (last Cholesky pivot ratio " + std::to_string(min_pivot_ratio) +
                         ")");
}

std::vector<double> rbf_predict(const RbfModel& model, const PointSet& queries) {
    if (!queries.empty() && queries.dim() != model.centers.dim())
        throw DataError("query dimension " + std::to_string(queries.dim()) + " does not match RBF dimension " +
                        std::to_string(model.centers.dim()));
    std::vector<double> out(queries.size());
    const double inv_two_theta = 1.0 / (2.0 * model.theta.value());
    parallel_for(queries.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t q = begin; q < end; ++q) {
            double acc = 0.0;
            for (std::size_t j = 0; j < model.centers.size(); ++j)
                acc += model.weights[j] *
                       std::exp(-squared_distance(queries[q], model.centers[j]) * inv_two_theta);
            out[q] = acc;
        }
    });
    return out;
}

RbfTuneResult rbf_tune(const SplitDataset& split, const ThetaSearchConfig& cfg) {
    RbfTuneResult out;
    out.search = search_theta_with(split.train.points, cfg, [&](Temperature theta) {
        try {
            const RbfModel model = rbf_fit(split.train, theta);
            return normalized_rmse(rbf_predict(model, split.validation.points), split.validation.values);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
    });
    out.theta = out.search.theta_opt;
    out.rmse = out.search.best_rmse();
    if (!std::isfinite(out.rmse))
        throw NumericalError("RBF tuning failed: no candidate temperature gave a usable factorization");
    return out;
}

} // namespace kinreg

#ifndef KINREG_RBF_HPP
#define KINREG_RBF_HPP

#include <vector>

#include "kinreg/dataset.hpp"
#include "kinreg/temperature.hpp"
#include "kinreg/types.hpp"

namespace kinreg {

/// Plain Gaussian RBF interpolant sum_j w_j exp(-|x - x_j|^2 / (2 theta)).
struct RbfModel {
    PointSet centers;
    std::vector<double> weights;
    Temperature theta{1.0};
    double ridge = 0.0; ///< diagonal shift actually used by the factorization
};

/// Solves (G + ridge I) w = phi with a dense Cholesky factorization of the
/// N x N Gram matrix. A failed factorization is retried with ridge 1e-10 and
/// then 1e-8 before giving up with NumericalError.
RbfModel rbf_fit(const RawDataset& train, Temperature theta, double ridge = 0.0);

std::vector<double> rbf_predict(const RbfModel& model, const PointSet& queries);

struct RbfTuneResult {
    Temperature theta{1.0};
    double rmse = 0.0;
    ThetaSearchResult search;
};

/// Walks the same temperature candidates as search_theta, scoring each with
/// the RBF validation RMSE. Candidates whose factorization fails score +inf.
RbfTuneResult rbf_tune(const SplitDataset& split, const ThetaSearchConfig& cfg = {});

} // namespace kinreg

#endif // KINREG_RBF_HPP

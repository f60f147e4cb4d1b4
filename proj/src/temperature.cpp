#include "kinreg/temperature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "kinreg/kernel.hpp"
#include "kinreg/metrics.hpp"

namespace kinreg {

std::string to_string(StopReason reason) {
    switch (reason) {
    case StopReason::Converged:
        return "converged";
    case StopReason::SmallStep:
        return "small-step";
    case StopReason::MaxIters:
        return "max-iters";
    }
    return "unknown";
}

double ThetaSearchResult::best_rmse() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& t : trace)
        if (t.theta == theta_opt.value())
            best = std::min(best, t.rmse);
    return best;
}

namespace {

std::vector<double> mean_point(const PointSet& points) {
    std::vector<double> mean(points.dim(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t k = 0; k < points.dim(); ++k)
            mean[k] += points[i][k];
    for (auto& m : mean)
        m /= static_cast<double>(points.size());
    return mean;
}

double rmse_or_inf(double r) { return std::isnan(r) ? std::numeric_limits<double>::infinity() : r; }

Temperature trace_argmin(const std::vector<ThetaTracePoint>& trace) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (rmse_or_inf(trace[i].rmse) < rmse_or_inf(trace[best].rmse))
            best = i;
    return Temperature(trace[best].theta);
}

} // namespace

Temperature theta_initial(const PointSet& points) {
    if (points.size() < 2)
        throw DataError("initial temperature needs at least 2 points");
    const auto mean = mean_point(points);
    double var = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        var += squared_distance(points[i], mean);
    var /= static_cast<double>(points.size());
    if (!(var > 0.0))
        throw DataError("initial temperature undefined: all points coincide (zero variance)");
    return Temperature(var);
}

double d_typ(const PointSet& points, int k) {
    const std::size_t n = points.size();
    if (k < 1)
        throw UsageError("k must be positive");
    if (n <= static_cast<std::size_t>(k))
        throw DataError("k-nearest-neighbour spacing needs more than k = " + std::to_string(k) + " points, have " +
                        std::to_string(n));
    double total = 0.0;
    std::priority_queue<double> nearest; // max-heap of the k smallest squared distances
    for (std::size_t i = 0; i < n; ++i) {
        while (!nearest.empty())
            nearest.pop();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double d2 = squared_distance(points[i], points[j]);
            if (nearest.size() < static_cast<std::size_t>(k)) {
                nearest.push(d2);
            } else if (d2 < nearest.top()) {
                nearest.pop();
                nearest.push(d2);
            }
        }
        double sum = 0.0;
        while (!nearest.empty()) {
            sum += std::sqrt(nearest.top());
            nearest.pop();
        }
        total += sum / k;
    }
    return total / static_cast<double>(n);
}

Temperature theta_next(const PointSet& points, Temperature theta_prev, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw UsageError("relaxation alpha must lie in [0,1]");
    const auto mean = mean_point(points);
    const DiscreteDistribution p = normalized_distribution(mean, points, theta_prev);
    double energy = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        energy += squared_distance(points[i], mean) * p[i];
    energy /= static_cast<double>(points.size());
    const double next = alpha * energy + (1.0 - alpha) * theta_prev.value();
    if (!(next > 0.0))
        throw NumericalError("temperature update collapsed to zero");
    return Temperature(next);
}

ThetaSearchResult search_theta_with(const PointSet& train_points, const ThetaSearchConfig& cfg,
                                    const std::function<double(Temperature)>& validation_rmse) {
    if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0))
        throw UsageError("relaxation alpha must lie in (0,1]");
    if (!(cfg.rel_tol > 0.0))
        throw UsageError("rel_tol must be positive");

    ThetaSearchResult result;
    const Temperature theta0 = theta_initial(train_points);
    const int k = std::min<int>(cfg.knn_k, static_cast<int>(train_points.size()) - 1);
    result.d_typ = d_typ(train_points, k);
    const double floor = 1e-3 * result.d_typ * result.d_typ;

    std::vector<ThetaTracePoint> memo;
    auto evaluate = [&](double theta) {
        for (const auto& m : memo)
            if (std::abs(m.theta - theta) <= 1e-12 * theta)
                return m.rmse;
        const double r = validation_rmse(Temperature(theta));
        memo.push_back({theta, r});
        return r;
    };

    const int max_iters = std::max(cfg.max_iters, 1);
    double theta = std::max(theta0.value(), floor);
    while (true) {
        const double rmse = evaluate(theta);
        result.trace.push_back({theta, rmse});
        const std::size_t n = result.trace.size();
        if (n > 1) {
            const double prev = result.trace[n - 2].rmse;
            if (std::abs(rmse - prev) < cfg.rel_tol * prev) {
                result.stop_reason = StopReason::Converged;
                break;
            }
        }
        if (static_cast<int>(n) >= max_iters) {
            result.stop_reason = StopReason::MaxIters;
            break;
        }
        const double next = std::max(theta_next(train_points, Temperature(theta), cfg.alpha).value(), floor);
        if (std::abs(next - theta) < cfg.rel_tol * theta) {
            result.stop_reason = StopReason::SmallStep;
            break;
        }
        theta = next;
    }
    result.theta_opt = trace_argmin(result.trace);
    return result;
}

double validation_rmse(const SplitDataset& split, Temperature theta, CorrectionLevel level,
                       const SolverConfig& solver) {
    const FittedModel model = fit(split.train, theta, level, solver);
    const auto pred = model.predict(split.validation.points);
    return normalized_rmse(pred, split.validation.values);
}

ThetaSearchResult search_theta(const SplitDataset& split, const ThetaSearchConfig& cfg) {
    return search_theta_with(split.train.points, cfg, [&](Temperature theta) {
        return validation_rmse(split, theta, cfg.level, cfg.solver);
    });
}

CgResult minimize_cg(const std::function<double(std::span<const double>)>& objective, std::vector<double> x0,
                     const CgConfig& cfg) {
    const std::size_t n = x0.size();
    CgResult res;
    auto f = [&](std::span<const double> x) {
        ++res.evaluations;
        const double v = objective(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    auto gradient = [&](const std::vector<double>& x) {
        std::vector<double> g(n);
        std::vector<double> probe = x;
        for (std::size_t i = 0; i < n; ++i) {
            probe[i] = x[i] + cfg.fd_step;
            const double up = f(probe);
            probe[i] = x[i] - cfg.fd_step;
            const double down = f(probe);
            probe[i] = x[i];
            g[i] = (up - down) / (2.0 * cfg.fd_step);
        }
        return g;
    };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            s += a[i] * b[i];
        return s;
    };
    auto axpy = [](const std::vector<double>& x, double t, const std::vector<double>& d) {
        std::vector<double> y = x;
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] += t * d[i];
        return y;
    };

    std::vector<double> x = std::move(x0);
    double fx = f(x);
    res.iterates.emplace_back(x, fx);
    res.x = x;
    res.value = fx;
    if (cfg.max_iters <= 0)
        return res;

    std::vector<double> g = gradient(x);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i)
        d[i] = -g[i];
    double trial_length = 1.0; // length of the first trial step, in x units
    int restarts = 0;
    constexpr double armijo = 1e-4;

    for (int it = 0; it < cfg.max_iters; ++it) {
        res.iterations = it + 1;
        const double gnorm = std::sqrt(dot(g, g));
        if (!std::isfinite(gnorm))
            break;
        if (gnorm < cfg.grad_tol) {
            res.stop = StopReason::Converged;
            break;
        }
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            for (std::size_t i = 0; i < n; ++i)
                d[i] = -g[i];
            slope = -gnorm * gnorm;
        }
        const double dnorm = std::sqrt(dot(d, d));
        double t = trial_length / dnorm;

        // Trial step plus the minimizer of the quadratic through f(0), f'(0), f(t).
        double best_t = 0.0, best_f = fx;
        const double ft = f(axpy(x, t, d));
        if (ft <= fx + armijo * t * slope && ft < best_f) {
            best_t = t;
            best_f = ft;
        }
        const double curvature = ft - fx - slope * t;
        if (curvature > 0.0) {
            const double tq = -slope * t * t / (2.0 * curvature);
            if (tq > 0.0 && std::isfinite(tq) && std::abs(tq - t) > 1e-12 * t) {
                const double fq = f(axpy(x, tq, d));
                if (fq <= fx + armijo * tq * slope && fq < best_f) {
                    best_t = tq;
                    best_f = fq;
                }
            }
        }
        for (int h = 0; best_t == 0.0 && h < 30; ++h) {
            t *= 0.5;
            const double fh = f(axpy(x, t, d));
            if (fh <= fx + armijo * t * slope) {
                best_t = t;
                best_f = fh;
            }
        }
        if (best_t == 0.0) {
            if (++restarts > cfg.max_restarts)
                break;
            for (std::size_t i = 0; i < n; ++i)
                d[i] = -g[i];
            trial_length *= 0.5;
            continue;
        }

        const std::vector<double> x_new = axpy(x, best_t, d);
        const double moved = best_t * dnorm;
        trial_length = std::max(2.0 * moved, 1e-3);
        std::vector<double> g_new = gradient(x_new);
        const double beta = std::max(0.0, (dot(g_new, g_new) - dot(g_new, g)) / dot(g, g));
        for (std::size_t i = 0; i < n; ++i)
            d[i] = -g_new[i] + beta * d[i];
        x = x_new;
        fx = best_f;
        g = std::move(g_new);
        res.iterates.emplace_back(x, fx);
        if (fx < res.value) {
            res.value = fx;
            res.x = x;
        }
        if (moved < cfg.step_tol) {
            res.stop = StopReason::SmallStep;
            break;
        }
    }
    return res;
}

ThetaSearchResult search_theta_mle(const SplitDataset& split, CorrectionLevel level, const CgConfig& cfg,
                                   const SolverConfig& solver) {
    ThetaSearchResult result;
    const Temperature theta0 = theta_initial(split.train.points);
    result.d_typ = d_typ(split.train.points, std::min<int>(5, static_cast<int>(split.train.size()) - 1));

    std::map<double, double> cache;
    auto objective = [&](std::span<const double> z) {
        const auto it = cache.find(z[0]);
        if (it != cache.end())
            return it->second;
        const double theta = std::exp(z[0]);
        double r = std::numeric_limits<double>::infinity();
        if (theta > 0.0 && std::isfinite(theta))
            r = validation_rmse(split, Temperature(theta), level, solver);
        cache.emplace(z[0], r);
        return r;
    };
    const CgResult cg = minimize_cg(objective, {std::log(theta0.value())}, cfg);
    for (const auto& [z, value] : cg.iterates)
        result.trace.push_back({std::exp(z[0]), value});
    result.stop_reason = cg.stop;
    result.theta_opt = trace_argmin(result.trace);
    return result;
}

} // namespace kinreg

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "kinreg/interpolator.hpp"
#include "kinreg/parallel.hpp"
#include "kinreg/random.hpp"
#include "oracles.hpp"

using namespace kinreg;

namespace {

RawDataset grid_1d(std::size_t n, double (*f)(double)) {
    RawDataset d{PointSet(1), {}};
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        d.points.push_back(std::vector<double>{x});
        d.values.push_back(f(x));
    }
    return d;
}

RawDataset make_random_data(Rng& rng, std::size_t n, std::size_t dim, const std::function<double(std::span<const double>)>& f) {
    RawDataset d{PointSet(dim), {}};
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& c : x)
            c = rng.uniform();
        d.points.push_back(x);
        d.values.push_back(f(x));
    }
    return d;
}

double rms(const std::vector<double>& e) {
    double s = 0.0;
    for (double v : e)
        s += v * v;
    return std::sqrt(s / static_cast<double>(e.size()));
}

} // namespace

TEST_SUITE("interpolator") {

TEST_CASE("constant data stays constant at every level") {
    Rng rng(1);
    const RawDataset d = make_random_data(rng, 40, 2, [](auto) { return 0.7; });
    PointSet q(2, {0.1, 0.1, 0.5, 0.9, 0.33, 0.66});
    for (int l = 0; l <= 2; ++l) {
        const FittedModel m = fit(d, Temperature(0.01), correction_level_from_int(l));
        for (double p : m.psi())
            CHECK(std::abs(p - 0.7) <= 1e-14);
        for (double v : m.predict(q))
            CHECK(std::abs(v - 0.7) <= 1e-14);
    }
}

TEST_CASE("psi equals the training values below the second-moment level") {
    Rng rng(2);
    const RawDataset d = make_random_data(rng, 30, 1, [](auto x) { return std::sin(6 * x[0]); });
    CHECK(fit(d, Temperature(0.01), CorrectionLevel::None).psi() == d.values);
    CHECK(fit(d, Temperature(0.01), CorrectionLevel::FirstMoment).psi() == d.values);
    CHECK(fit(d, Temperature(0.01), CorrectionLevel::SecondMoment).psi() != d.values);
}

TEST_CASE("linear data on a grid: self-prediction reproduces the values") {
    const RawDataset d = grid_1d(21, [](double x) { return 2 * x - 1; });
    const double theta = 0.02;
    const FittedModel m = fit(d, Temperature(theta), CorrectionLevel::SecondMoment);
    // Only the two hull vertices lack a first-moment root.
    CHECK(m.report().n_failed_corrections == 2);
    CHECK_FALSE(m.self_corrections().front().converged);
    CHECK_FALSE(m.self_corrections().back().converged);
    CHECK(m.psi().front() == d.values.front());
    std::vector<std::vector<double>> centers;
    for (std::size_t i = 0; i < d.size(); ++i)
        centers.push_back({d.points[i][0]});
    for (std::size_t i = 3; i + 3 < d.size(); ++i) {
        const double x = d.points[i][0];
        const double xt = oracle::first_moment_root_1d(x, {d.points.flat().begin(), d.points.flat().end()}, theta,
                                                       -1.0, 2.0);
        const double phi_hat = oracle::kernel_average(centers, d.values, {xt}, theta);
        CHECK(std::abs(phi_hat - d.values[i]) <= 1e-6);
        CHECK(std::abs(m.psi()[i] - (2 * d.values[i] - phi_hat)) <= 1e-8);
        CHECK(std::abs(m.psi()[i] - d.values[i]) <= 1e-6);
    }
}

TEST_CASE("quadratic data: self-correction lowers psi in the interior") {
    const RawDataset d = grid_1d(41, [](double x) { return x * x; });
    const FittedModel m = fit(d, Temperature(0.002), CorrectionLevel::SecondMoment);
    for (std::size_t i = 5; i + 5 < d.size(); ++i)
        CHECK(m.psi()[i] < d.values[i]);
}

TEST_CASE("quadratic data: second moment beats first moment at training points") {
    const RawDataset d = grid_1d(101, [](double x) { return x * x; });
    const Temperature theta(4e-4);
    const auto p1 = fit(d, theta, CorrectionLevel::FirstMoment).predict(d.points);
    const auto p2 = fit(d, theta, CorrectionLevel::SecondMoment).predict(d.points);
    std::vector<double> e1, e2;
    for (std::size_t i = 20; i <= 80; ++i) {
        e1.push_back(p1[i] - d.values[i]);
        e2.push_back(p2[i] - d.values[i]);
    }
    CHECK(rms(e2) < rms(e1));
    CHECK(rms(e2) <= 1e-4);
}

TEST_CASE("cold limit returns the training value") {
    Rng rng(3);
    const RawDataset d = make_random_data(rng, 25, 2, [](auto x) { return x[0] - 3 * x[1]; });
    const FittedModel m = fit(d, Temperature(1e-12), CorrectionLevel::None);
    const auto p = m.predict(d.points);
    for (std::size_t i = 0; i < d.size(); ++i)
        CHECK(std::abs(p[i] - d.values[i]) <= 1e-9);
}

TEST_CASE("hot limit returns the mean") {
    Rng rng(4);
    const RawDataset d = make_random_data(rng, 25, 2, [](auto x) { return std::exp(x[0]) * x[1]; });
    const double mean = std::accumulate(d.values.begin(), d.values.end(), 0.0) / 25.0;
    const FittedModel m = fit(d, Temperature(1e12), CorrectionLevel::None);
    for (double v : m.predict(PointSet(2, {0.0, 0.0, 0.5, 0.2, 3.0, -1.0})))
        CHECK(std::abs(v - mean) <= 1e-6);
}

TEST_CASE("first moment correction is exact on a linear target") {
    Rng rng(5);
    const RawDataset d = make_random_data(rng, 30, 1, [](auto x) { return 0.3 - 1.2 * x[0]; });
    const FittedModel m = fit(d, Temperature(0.05), CorrectionLevel::FirstMoment);
    PredictReport r;
    const auto p = m.predict(PointSet(1, {0.37}), &r);
    REQUIRE(r.n_failed_corrections == 0);
    CHECK(std::abs(p[0] - (-0.144)) <= 1e-6);
}

TEST_CASE("first moment prediction on a linear target in several dimensions") {
    // For phi = c + b.x the level-1 prediction is c + b.m exactly, where m is
    // the normalized mean of the centers at the shifted point; inside the hull
    // m = x and the prediction is exact.
    Rng rng(6);
    for (std::size_t dim = 1; dim <= 3; ++dim) {
        auto target = [dim](std::span<const double> x) {
            double s = 0.25;
            for (std::size_t k = 0; k < dim; ++k)
                s += (k + 1.0) * x[k];
            return s;
        };
        const RawDataset d = make_random_data(rng, 50, dim, target);
        const RawDataset q = make_random_data(rng, 40, dim, target);
        const Temperature theta(0.02);
        const auto p = fit(d, theta, CorrectionLevel::FirstMoment).predict(q.points);
        const FirstMomentSolver solver(d.points);
        int exact = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            const auto c = solver.solve(q.points[i], theta);
            std::vector<double> xt(q.points[i].begin(), q.points[i].end());
            if (c.converged)
                for (std::size_t k = 0; k < dim; ++k)
                    xt[k] += c.delta[k];
            std::vector<std::vector<double>> centers;
            for (std::size_t j = 0; j < d.size(); ++j)
                centers.emplace_back(d.points[j].begin(), d.points[j].end());
            const auto w = oracle::naive_distribution(centers, xt, theta.value());
            std::vector<double> m(dim, 0.0);
            double moment_err = 0.0;
            for (std::size_t j = 0; j < d.size(); ++j)
                for (std::size_t k = 0; k < dim; ++k)
                    m[k] += w[j] * centers[j][k];
            for (std::size_t k = 0; k < dim; ++k)
                moment_err = std::max(moment_err, std::abs(m[k] - q.points[i][k]));
            CHECK(std::abs(p[i] - target(m)) <= 1e-10);
            if (c.converged && moment_err <= 1e-8) {
                ++exact;
                CHECK(std::abs(p[i] - q.values[i]) <= 1e-6);
            }
        }
        CHECK(exact >= 10);
    }
}

TEST_CASE("fit report counts") {
    const RawDataset lin = grid_1d(21, [](double x) { return x; });
    CHECK(fit(lin, Temperature(0.01), CorrectionLevel::SecondMoment).report().n_failed_corrections == 2);
    CHECK(fit_report(fit(lin, Temperature(0.01), CorrectionLevel::FirstMoment)).n_failed_corrections == 0);

    const RawDataset two{PointSet(1, {0.2, 0.8}), {1.0, 1.0}};
    CHECK(fit(two, Temperature(0.05), CorrectionLevel::SecondMoment).report().n_failed_corrections == 0);

    Rng rng(7);
    const RawDataset scattered = make_random_data(rng, 30, 2, [](auto x) { return x[0]; });
    const FittedModel cold = fit(scattered, Temperature(1e-14), CorrectionLevel::SecondMoment);
    const FitReport r = cold.report();
    CHECK(r.n_failed_corrections <= scattered.size());
    for (double v : cold.predict(scattered.points))
        CHECK(std::isfinite(v));
}

TEST_CASE("interior of a linear grid converges everywhere") {
    const RawDataset lin = grid_1d(21, [](double x) { return x; });
    const FittedModel m = fit(lin, Temperature(0.01), CorrectionLevel::SecondMoment);
    for (std::size_t i = 1; i + 1 < lin.size(); ++i)
        CHECK(m.self_corrections()[i].converged);
}

TEST_CASE("predictions scale with the data") {
    Rng rng(8);
    const RawDataset d = make_random_data(rng, 60, 2, [](auto x) { return std::cos(4 * x[0]) + x[1]; });
    RawDataset scaled = d;
    for (auto& v : scaled.values)
        v *= -3.0;
    const RawDataset q = make_random_data(rng, 50, 2, [](auto) { return 0.0; });
    for (int l = 0; l <= 2; ++l) {
        const auto a = fit(d, Temperature(0.005), correction_level_from_int(l)).predict(q.points);
        const auto b = fit(scaled, Temperature(0.005), correction_level_from_int(l)).predict(q.points);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(std::abs(b[i] + 3.0 * a[i]) <= 1e-13 * (1.0 + std::abs(a[i])));
    }
}

TEST_CASE("threaded prediction is bit-identical to sequential") {
    Rng rng(9);
    const RawDataset d = make_random_data(rng, 300, 2, [](auto x) { return x[0] * x[1]; });
    const RawDataset q = make_random_data(rng, 500, 2, [](auto) { return 0.0; });
    set_thread_count(1);
    const FittedModel m1 = fit(d, Temperature(0.003), CorrectionLevel::SecondMoment);
    const auto p1 = m1.predict(q.points);
    set_thread_count(4);
    const FittedModel m4 = fit(d, Temperature(0.003), CorrectionLevel::SecondMoment);
    const auto p4 = m4.predict(q.points);
    set_thread_count(0);
    CHECK(m1.psi() == m4.psi());
    CHECK(p1 == p4);
}

TEST_CASE("level parsing and model invariants") {
    CHECK(correction_level_from_int(2) == CorrectionLevel::SecondMoment);
    CHECK_THROWS_AS(correction_level_from_int(3), UsageError);
    CHECK_THROWS_AS(correction_level_from_int(-1), UsageError);
    CHECK_THROWS_AS(FittedModel(PointSet(1, {0.0, 1.0}), {1, 2}, {1, 3}, Temperature(1.0), CorrectionLevel::None, {},
                                {}),
                    DataError);
    CHECK_THROWS_AS(FittedModel(PointSet(1, {0.0, 1.0}), {1, 2}, {1}, Temperature(1.0), CorrectionLevel::None, {}, {}),
                    DataError);
    CHECK_THROWS_AS(FittedModel(PointSet(1, {0.0, 1.0}), {1, 2}, {1, 2}, Temperature(1.0),
                                CorrectionLevel::SecondMoment, {}, {}),
                    DataError);
}

TEST_CASE("query dimension must match") {
    const RawDataset d{PointSet(2, {0, 0, 1, 1}), {0, 1}};
    const FittedModel m = fit(d, Temperature(0.1), CorrectionLevel::None);
    CHECK_THROWS_AS(m.predict(PointSet(3, {0, 0, 0})), DataError);
}

} // TEST_SUITE

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kinreg/benchfn.hpp"
#include "kinreg/metrics.hpp"
#include "kinreg/random.hpp"

using namespace kinreg;

namespace {

// Franke's four Gaussian bumps written out term by term.
double franke_by_hand(double x, double y) {
    const double t1 = 0.75 * std::exp(-std::pow(9 * x - 2, 2) / 4 - std::pow(9 * y - 2, 2) / 4);
    const double t2 = 0.75 * std::exp(-std::pow(9 * x + 1, 2) / 49 - std::pow(9 * y + 1, 2) / 10);
    const double t3 = 0.5 * std::exp(-std::pow(9 * x - 7, 2) / 4 - std::pow(9 * y - 3, 2) / 4);
    const double t4 = -0.2 * std::exp(-std::pow(9 * x - 4, 2) - std::pow(9 * y - 7, 2));
    return t1 + t2 + t3 + t4;
}

} // namespace

TEST_SUITE("benchfn") {

TEST_CASE("closed-form values") {
    const std::vector<double> zero6(6, 0.0);
    CHECK(std::abs(BenchmarkFunction::ackley6d()(zero6)) <= 1e-14);
    CHECK(BenchmarkFunction::rastrigin(6)(zero6) == 0.0);
    CHECK(BenchmarkFunction::rastrigin(3)(std::vector<double>(3, 0.0)) == 0.0);
    CHECK(BenchmarkFunction::weierstrass(3)(std::vector<double>{0.0}) == 2.3125);

    // At the origin: 0.75 e^{-2} + 0.75 e^{-1/49 - 1/10} + 0.5 e^{-49/4 - 9/4} - 0.2 e^{-16 - 49}
    const double f00 = 0.75 * std::exp(-2.0) + 0.75 * std::exp(-1.0 / 49 - 0.1) + 0.5 * std::exp(-14.5) -
                       0.2 * std::exp(-65.0);
    CHECK(BenchmarkFunction::franke2d()(std::vector<double>{0.0, 0.0}) == doctest::Approx(f00).epsilon(1e-14));
    CHECK(std::abs(f00 - 0.7664) < 5e-5);

    const std::vector<double> third(6, 1.0 / 3.0);
    const double norm = 2.0 * std::pow(0.2 * std::sqrt(std::numbers::pi), 6);
    const double camel = (1.0 + std::exp(-6.0 / 9.0 / 0.04)) / norm;
    CHECK(BenchmarkFunction::camel(6)(third) == doctest::Approx(camel).epsilon(1e-13));
    CHECK(std::abs(camel - 252.0) < 0.5);
}

TEST_CASE("Franke matches a term-by-term evaluation") {
    for (double x : {0.0, 0.3, 0.8, 1.0})
        for (double y : {0.0, 0.45, 0.9})
            CHECK(BenchmarkFunction::franke2d()(std::vector<double>{x, y}) ==
                  doctest::Approx(franke_by_hand(x, y)).epsilon(1e-14));
}

TEST_CASE("Rastrigin is separable") {
    Rng rng(1);
    const auto r6 = BenchmarkFunction::rastrigin(6);
    const auto r1 = BenchmarkFunction::rastrigin(1);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x(6);
        double sum = 0.0;
        for (auto& c : x) {
            c = rng.uniform() * 2 - 1;
            sum += r1(std::vector<double>{c});
        }
        CHECK(std::abs(r6(x) - sum) <= 1e-12);
    }
}

TEST_CASE("camel symmetries") {
    Rng rng(2);
    const auto f = BenchmarkFunction::camel(3);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
        const double v = f(x);
        std::vector<double> perm{x[2], x[0], x[1]};
        std::vector<double> mirror{1 - x[0], 1 - x[1], 1 - x[2]};
        CHECK(std::abs(f(perm) - v) <= 1e-12 * std::max(1.0, v));
        CHECK(std::abs(f(mirror) - v) <= 1e-12 * std::max(1.0, v));
    }
}

TEST_CASE("Weierstrass gets steeper with more terms") {
    double prev = 0.0;
    for (unsigned terms = 1; terms <= 6; ++terms) {
        const auto f = BenchmarkFunction::weierstrass(terms);
        double slope = 0.0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
            slope = std::max(slope, std::abs(f(std::vector<double>{b}) - f(std::vector<double>{a})) * n);
        }
        CHECK(slope >= prev);
        prev = slope;
    }
}

TEST_CASE("names and dimension checks") {
    CHECK(BenchmarkFunction::from_name("franke").name() == "franke2d");
    CHECK(BenchmarkFunction::from_name("camel", 3).dim() == 3);
    CHECK(BenchmarkFunction::from_name("camel").dim() == 1);
    CHECK(BenchmarkFunction::from_name("rastrigin").dim() == 6);
    CHECK_THROWS_AS(BenchmarkFunction::from_name("nope"), UsageError);
    CHECK_THROWS_AS(BenchmarkFunction::from_name("ackley6d", 3), UsageError);
    CHECK_THROWS_AS(BenchmarkFunction::franke2d()(std::vector<double>{0.0}), DataError);
}

TEST_CASE("regular grid sampling") {
    const auto g1 = sample(BenchmarkFunction::weierstrass(3), 3, SamplingMode::RegularGrid, 0);
    CHECK(g1.points.flat()[0] == 0.0);
    CHECK(g1.points.flat()[1] == 0.5);
    CHECK(g1.points.flat()[2] == 1.0);
    const auto g2 = sample(BenchmarkFunction::franke2d(), 9, SamplingMode::RegularGrid, 0);
    CHECK(g2.size() == 9);
    CHECK(g2.points[4][0] == 0.5);
    CHECK(g2.points[4][1] == 0.5);
    CHECK(g2.points[8][0] == 1.0);
    CHECK(g2.points[8][1] == 1.0);
    const auto g3 = sample(BenchmarkFunction::franke2d(), 7, SamplingMode::RegularGrid, 0);
    CHECK(g3.size() == 7);
}

TEST_CASE("uniform sampling is seeded") {
    const auto a = sample(BenchmarkFunction::camel(2), 50, SamplingMode::UniformRandom, 7);
    const auto b = sample(BenchmarkFunction::camel(2), 50, SamplingMode::UniformRandom, 7);
    const auto c = sample(BenchmarkFunction::camel(2), 50, SamplingMode::UniformRandom, 8);
    CHECK(a.points == b.points);
    CHECK(a.values == b.values);
    CHECK(a.points != c.points);
    for (double x : a.points.flat()) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("multiplicative noise") {
    RawDataset d{PointSet(1), {}};
    for (int i = 0; i < 100000; ++i) {
        d.points.push_back(std::vector<double>{0.0});
        d.values.push_back(i % 10 == 0 ? 0.0 : 1.0 + (i % 7));
    }
    CHECK(add_noise(d, NoiseSpec{0.0, 1.0 / 3.0, 0.0, 1}).values == d.values);

    const RawDataset n1 = add_noise(d, NoiseSpec{0.05, 1.0 / 3.0, 0.0, 11});
    const RawDataset n2 = add_noise(d, NoiseSpec{0.05, 1.0 / 3.0, 0.0, 11});
    CHECK(n1.values == n2.values);
    CHECK(n1.points == d.points);

    double sum = 0.0, sum2 = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.values[i] == 0.0) {
            CHECK(n1.values[i] == 0.0);
            continue;
        }
        const double r = n1.values[i] / d.values[i] - 1.0;
        sum += r;
        sum2 += r * r;
        ++m;
    }
    const double mean = sum / m;
    const double sd = std::sqrt(sum2 / m - mean * mean);
    CHECK(std::abs(sd - 0.05 / 3.0) <= 0.05 * (0.05 / 3.0));
    CHECK(std::abs(mean) < 1e-3);
}

} // TEST_SUITE

TEST_SUITE("metrics") {

TEST_CASE("perfect prediction") {
    const std::vector<double> t{0.5, -1.0, 2.0};
    const MetricReport m = compute_metrics(t, t);
    CHECK(m.l1_mean == 0.0);
    CHECK(m.rmse == 0.0);
    CHECK(m.linf == 0.0);
    REQUIRE(m.r2);
    CHECK(*m.r2 == 1.0);
}

TEST_CASE("hand-computed values") {
    const MetricReport m = compute_metrics(std::vector<double>{1, 1}, std::vector<double>{0, 2});
    CHECK(m.l1_mean == 1.0);
    CHECK(m.rmse == 0.5);
    CHECK(m.linf == 1.0);
    REQUIRE(m.r2);
    CHECK(*m.r2 == 0.0);
}

TEST_CASE("degenerate truth") {
    const MetricReport c = compute_metrics(std::vector<double>{1, 2}, std::vector<double>{3, 3});
    CHECK_FALSE(c.r2);
    CHECK(std::isfinite(c.rmse));
    const MetricReport z = compute_metrics(std::vector<double>{1, -1}, std::vector<double>{0, 0});
    CHECK(z.rmse_unnormalized);
    CHECK(z.rmse == 1.0);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{1}, std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(compute_metrics(std::vector<double>{}, std::vector<double>{}), DataError);
}

TEST_CASE("scale behaviour") {
    const std::vector<double> p{0.1, 0.4, -0.3, 0.9}, t{0.0, 0.5, -0.2, 1.0};
    std::vector<double> ps, ts;
    for (std::size_t i = 0; i < p.size(); ++i) {
        ps.push_back(7 * p[i]);
        ts.push_back(7 * t[i]);
    }
    const auto a = compute_metrics(p, t), b = compute_metrics(ps, ts);
    CHECK(b.rmse == doctest::Approx(a.rmse).epsilon(1e-14));
    CHECK(*b.r2 == doctest::Approx(*a.r2).epsilon(1e-14));
    CHECK(b.l1_mean == doctest::Approx(7 * a.l1_mean).epsilon(1e-14));
    CHECK(b.linf == doctest::Approx(7 * a.linf).epsilon(1e-14));
    CHECK(a.linf >= a.l1_mean);
}

} // TEST_SUITE

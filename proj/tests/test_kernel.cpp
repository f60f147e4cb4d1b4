#include <limits>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "kinreg/kernel.hpp"
#include "kinreg/random.hpp"
#include "oracles.hpp"

using namespace kinreg;

namespace {

PointSet random_points(Rng& rng, std::size_t n, std::size_t dim) {
    PointSet p(dim);
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& c : x)
            c = rng.uniform();
        p.push_back(x);
    }
    return p;
}

std::vector<std::vector<double>> rows(const PointSet& p) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        out.emplace_back(p[i].begin(), p[i].end());
    return out;
}

} // namespace

TEST_SUITE("kernel") {

TEST_CASE("gaussian_unnorm values") {
    CHECK(gaussian_unnorm(0.0, Temperature(0.3)) == 1.0);
    CHECK(gaussian_unnorm(2 * 0.7, Temperature(0.7)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(gaussian_unnorm(1.0, Temperature(0.5)) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
}

TEST_CASE("temperature must be positive and finite") {
    CHECK_THROWS_AS(Temperature(0.0), UsageError);
    CHECK_THROWS_AS(Temperature(-1.0), UsageError);
    CHECK_THROWS_AS(Temperature(std::numeric_limits<double>::infinity()), UsageError);
    CHECK_THROWS_AS(Temperature(NAN), UsageError);
}

TEST_CASE("equidistant query splits evenly") {
    const PointSet c(1, {-1.0, 1.0});
    const auto p = normalized_distribution(std::vector<double>{0.0}, c, Temperature(0.2));
    CHECK(p[0] == 0.5);
    CHECK(p[1] == 0.5);
}

TEST_CASE("cold limit concentrates on the coincident center") {
    const PointSet c(2, {0.1, 0.2, 0.5, 0.5, 0.9, 0.3});
    const auto p = normalized_distribution(c[1], c, Temperature(1e-12));
    CHECK(p[1] == 1.0);
    CHECK(p[0] == 0.0);
    CHECK(p[2] == 0.0);
}

TEST_CASE("hot limit is uniform") {
    Rng rng(5);
    const PointSet c = random_points(rng, 37, 3);
    const auto p = normalized_distribution(std::vector<double>{0.3, 0.1, 0.9}, c, Temperature(1e12));
    for (double w : p)
        CHECK(std::abs(w - 1.0 / 37.0) < 1e-6);
}

TEST_CASE("normalization, positivity and agreement with the naive sum") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 1 + trial % 4;
        const PointSet c = random_points(rng, 30, dim);
        std::vector<double> q(dim);
        for (auto& x : q)
            x = rng.uniform();
        const double theta = std::pow(10.0, -2.0 + 2.0 * rng.uniform());
        const auto p = normalized_distribution(q, c, Temperature(theta));
        const double sum = std::accumulate(p.begin(), p.end(), 0.0);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
        const auto naive = oracle::naive_distribution(rows(c), q, theta);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i] >= 0.0);
            CHECK(std::abs(p[i] - naive[i]) <= 1e-12);
        }
    }
}

TEST_CASE("sum stays one in the deep cold regime") {
    Rng rng(3);
    const PointSet c = random_points(rng, 50, 2);
    const auto p = normalized_distribution(std::vector<double>{0.77, 0.31}, c, Temperature(1e-9));
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) <= 1e-12);
}

TEST_CASE("translation invariance") {
    Rng rng(2);
    const PointSet c = random_points(rng, 25, 2);
    PointSet shifted(2);
    for (std::size_t i = 0; i < c.size(); ++i)
        shifted.push_back(std::vector<double>{c[i][0] + 3.25, c[i][1] - 1.5});
    const auto a = normalized_distribution(std::vector<double>{0.4, 0.6}, c, Temperature(0.02));
    const auto b = normalized_distribution(std::vector<double>{3.65, -0.9}, shifted, Temperature(0.02));
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) <= 1e-12);
}

TEST_CASE("weights decrease with distance") {
    // Centers on a ray from the query; the others stay fixed.
    const PointSet c(1, {0.1, 0.2, 0.4, 0.8});
    const auto p = normalized_distribution(std::vector<double>{0.0}, c, Temperature(0.05));
    CHECK(p[0] > p[1]);
    CHECK(p[1] > p[2]);
    CHECK(p[2] > p[3]);
}

TEST_CASE("kernel_average matches the direct weighted mean") {
    Rng rng(8);
    const PointSet c = random_points(rng, 40, 2);
    std::vector<double> v(40);
    for (auto& x : v)
        x = rng.normal(0.0, 1.0);
    std::vector<double> scratch(40);
    const std::vector<double> q{0.25, 0.75};
    CHECK(kernel_average(q, c, v, Temperature(0.01), scratch) ==
          doctest::Approx(oracle::kernel_average(rows(c), v, q, 0.01)).epsilon(1e-12));
}

TEST_CASE("dimension mismatch is rejected") {
    const PointSet c(2, {0.0, 0.0});
    CHECK_THROWS_AS(normalized_distribution(std::vector<double>{0.0}, c, Temperature(1.0)), DataError);
}

} // TEST_SUITE

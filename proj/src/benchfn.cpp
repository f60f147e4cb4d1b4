#include "kinreg/benchfn.hpp"

#include <cmath>
#include <numbers>

#include "kinreg/random.hpp"

namespace kinreg {

namespace {

constexpr double kPi = std::numbers::pi;

double eval_franke(double x, double y) {
    const double a = 9.0 * x, b = 9.0 * y;
    return 0.75 * std::exp(-(a - 2) * (a - 2) / 4.0 - (b - 2) * (b - 2) / 4.0) +
           0.75 * std::exp(-(a + 1) * (a + 1) / 49.0 - (b + 1) * (b + 1) / 10.0) +
           0.5 * std::exp(-(a - 7) * (a - 7) / 4.0 - (b - 3) * (b - 3) / 4.0) -
           0.2 * std::exp(-(a - 4) * (a - 4) - (b - 7) * (b - 7));
}

double eval_camel(std::span<const double> x) {
    constexpr double k = 0.2;
    double s1 = 0.0, s2 = 0.0;
    for (double xi : x) {
        s1 += (xi - 1.0 / 3.0) * (xi - 1.0 / 3.0);
        s2 += (xi - 2.0 / 3.0) * (xi - 2.0 / 3.0);
    }
    const double norm = 2.0 * std::pow(k * std::sqrt(kPi), static_cast<double>(x.size()));
    return (std::exp(-s1 / (k * k)) + std::exp(-s2 / (k * k))) / norm;
}

double eval_ackley(std::span<const double> x) {
    const auto d = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double xi : x) {
        sq += xi * xi;
        cs += std::cos(2.0 * kPi * xi);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::numbers::e;
}

double eval_weierstrass(double x, unsigned terms) {
    double sum = 0.0, amp = 1.0, freq = 1.0;
    for (unsigned i = 0; i < terms; ++i) {
        sum += amp * std::cos(freq * kPi * x);
        amp *= 0.75;
        freq *= 5.0;
    }
    return sum;
}

double eval_rastrigin(std::span<const double> x) {
    constexpr double a = 10.0;
    double sum = 0.0;
    for (double xi : x)
        sum += xi * xi - a * std::cos(2.0 * kPi * xi) + a;
    return sum;
}

} // namespace

BenchmarkFunction::BenchmarkFunction(Kind kind, std::size_t dim, unsigned terms)
    : kind_(kind), dim_(dim), terms_(terms) {
    if (dim_ == 0)
        throw UsageError("benchmark function dimension must be positive");
    if (kind_ == Kind::Weierstrass && terms_ == 0)
        throw UsageError("weierstrass needs at least one term");
}

BenchmarkFunction BenchmarkFunction::from_name(const std::string& name, std::size_t dim, unsigned terms) {
    auto check_dim = [&](std::size_t fixed) {
        if (dim != 0 && dim != fixed)
            throw UsageError(name + " is defined for dimension " + std::to_string(fixed) + " only");
    };
    if (name == "franke2d" || name == "franke") {
        check_dim(2);
        return franke2d();
    }
    if (name == "ackley6d" || name == "ackley") {
        check_dim(6);
        return ackley6d();
    }
    if (name == "weierstrass") {
        check_dim(1);
        return weierstrass(terms);
    }
    if (name == "camel")
        return camel(dim == 0 ? 1 : dim);
    if (name == "rastrigin")
        return rastrigin(dim == 0 ? 6 : dim);
    throw UsageError("unknown benchmark function '" + name + "'");
}

std::string BenchmarkFunction::name() const {
    switch (kind_) {
    case Kind::Franke2D:
        return "franke2d";
    case Kind::Camel:
        return "camel";
    case Kind::Ackley6D:
        return "ackley6d";
    case Kind::Weierstrass:
        return "weierstrass";
    case Kind::Rastrigin:
        return "rastrigin";
    }
    return "unknown";
}

double BenchmarkFunction::operator()(std::span<const double> x) const {
    if (x.size() != dim_)
        throw DataError(name() + " expects dimension " + std::to_string(dim_) + ", got " +
                        std::to_string(x.size()));
    switch (kind_) {
    case Kind::Franke2D:
        return eval_franke(x[0], x[1]);
    case Kind::Camel:
        return eval_camel(x);
    case Kind::Ackley6D:
        return eval_ackley(x);
    case Kind::Weierstrass:
        return eval_weierstrass(x[0], terms_);
    case Kind::Rastrigin:
        return eval_rastrigin(x);
    }
    return 0.0;
}

RawDataset sample(const BenchmarkFunction& fn, std::size_t n, SamplingMode mode, std::uint64_t seed) {
    if (n < 2)
        throw UsageError("sampling needs N >= 2");
    const std::size_t dim = fn.dim();
    RawDataset data{PointSet(dim), {}};
    data.points.reserve(n);
    data.values.reserve(n);
    std::vector<double> x(dim);

    if (mode == SamplingMode::UniformRandom) {
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& c : x)
                c = rng.uniform();
            data.points.push_back(x);
            data.values.push_back(fn(x));
        }
        return data;
    }

    auto per_axis = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / dim) - 1e-9));
    per_axis = std::max<std::size_t>(per_axis, 2);
    while (std::pow(static_cast<double>(per_axis), static_cast<double>(dim)) < static_cast<double>(n))
        ++per_axis;
    const double h = 1.0 / static_cast<double>(per_axis - 1);
    std::vector<std::size_t> idx(dim, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < dim; ++k)
            x[k] = static_cast<double>(idx[k]) * h;
        data.points.push_back(x);
        data.values.push_back(fn(x));
        // Odometer increment, last axis fastest.
        for (std::size_t k = dim; k-- > 0;) {
            if (++idx[k] < per_axis)
                break;
            idx[k] = 0;
        }
    }
    return data;
}

RawDataset add_noise(RawDataset data, const NoiseSpec& spec) {
    if (!(spec.s >= 0.0))
        throw UsageError("noise scale must be non-negative");
    if (spec.s == 0.0)
        return data;
    Rng rng(spec.seed);
    for (auto& v : data.values)
        v *= 1.0 + spec.s * rng.normal(spec.mu, spec.sigma);
    return data;
}

} // namespace kinreg

#ifndef KINREG_BENCHFN_HPP
#define KINREG_BENCHFN_HPP

#include <cstdint>
#include <span>
#include <string>

#include "kinreg/dataset.hpp"

namespace kinreg {

/// Closed-form test targets.
class BenchmarkFunction {
public:
    enum class Kind { Franke2D, Camel, Ackley6D, Weierstrass, Rastrigin };

    static BenchmarkFunction franke2d() { return {Kind::Franke2D, 2, 0}; }
    /// Two-humped Gaussian camel with width k = 0.2.
    static BenchmarkFunction camel(std::size_t dim) { return {Kind::Camel, dim, 0}; }
    static BenchmarkFunction ackley6d() { return {Kind::Ackley6D, 6, 0}; }
    /// Partial Weierstrass sum with `terms` cosines on x in [0,1].
    static BenchmarkFunction weierstrass(unsigned terms) { return {Kind::Weierstrass, 1, terms}; }
    /// Separable Rastrigin with A = 10.
    static BenchmarkFunction rastrigin(std::size_t dim) { return {Kind::Rastrigin, dim, 0}; }

    /// Accepts franke2d, camel, ackley6d, weierstrass, rastrigin.
    static BenchmarkFunction from_name(const std::string& name, std::size_t dim = 0, unsigned terms = 3);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    unsigned terms() const { return terms_; }
    std::string name() const;

    double operator()(std::span<const double> x) const;

private:
    BenchmarkFunction(Kind kind, std::size_t dim, unsigned terms);

    Kind kind_;
    std::size_t dim_;
    unsigned terms_;
};

enum class SamplingMode { UniformRandom, RegularGrid };

/// N points on [0,1]^D with exact function values. RegularGrid uses the
/// smallest lattice with m^D >= N points (m per axis, spacing 1/(m-1)),
/// truncated to the first N points in lexicographic order.
RawDataset sample(const BenchmarkFunction& fn, std::size_t n, SamplingMode mode, std::uint64_t seed);

/// Multiplicative Gaussian noise phi (1 + s eps), eps ~ Normal(mu, sigma).
struct NoiseSpec {
    double s = 0.0;
    double sigma = 1.0 / 3.0;
    double mu = 0.0;
    std::uint64_t seed = 0;
};

RawDataset add_noise(RawDataset data, const NoiseSpec& spec);

} // namespace kinreg

#endif // KINREG_BENCHFN_HPP

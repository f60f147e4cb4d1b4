#ifndef KINREG_TYPES_HPP
#define KINREG_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kinreg {

/// Malformed or inconsistent input data (CLI exit code 2).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure could not produce a usable result (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or option combinations (CLI exit code 1).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// N points of dimension D stored row-major in one contiguous buffer.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t dim) : dim_(dim) {}
    PointSet(std::size_t dim, std::vector<double> coords);
    PointSet(std::size_t dim, std::initializer_list<double> coords)
        : PointSet(dim, std::vector<double>(coords)) {}

    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }
    std::span<double> operator[](std::size_t i) {
        return {coords_.data() + i * dim_, dim_};
    }

    void push_back(std::span<const double> point);
    void reserve(std::size_t n) { coords_.reserve(n * dim_); }

    std::span<const double> flat() const { return coords_; }
    std::span<double> flat() { return coords_; }

    friend bool operator==(const PointSet&, const PointSet&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

/// Kernel width, a positive finite squared length.
class Temperature {
public:
    explicit Temperature(double theta);
    double value() const { return theta_; }

    friend bool operator==(Temperature, Temperature) = default;

private:
    double theta_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

} // namespace kinreg

#endif // KINREG_TYPES_HPP

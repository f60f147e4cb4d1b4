#include "kinreg/types.hpp"

#include <string>

namespace kinreg {

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0 && !coords_.empty())
        throw DataError("point set with zero dimension cannot hold coordinates");
    if (dim_ != 0 && coords_.size() % dim_ != 0)
        throw DataError("coordinate count " + std::to_string(coords_.size()) +
                        " is not a multiple of dimension " + std::to_string(dim_));
}

void PointSet::push_back(std::span<const double> point) {
    if (point.size() != dim_)
        throw DataError("point of dimension " + std::to_string(point.size()) +
                        " added to set of dimension " + std::to_string(dim_));
    coords_.insert(coords_.end(), point.begin(), point.end());
}

Temperature::Temperature(double theta) : theta_(theta) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw UsageError("temperature must be positive and finite, got " + std::to_string(theta));
}

} // namespace kinreg

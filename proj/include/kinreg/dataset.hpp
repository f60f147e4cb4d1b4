#ifndef KINREG_DATASET_HPP
#define KINREG_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "kinreg/types.hpp"

namespace kinreg {

/// Scattered samples {x_i, phi_i}.
struct RawDataset {
    PointSet points;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    std::size_t dim() const { return points.dim(); }

    /// Throws DataError naming the first offending entry. `min_size` is 2 for
    /// training data; query sets may be empty.
    void validate(std::size_t min_size = 2) const;

    RawDataset subset(std::span<const std::size_t> indices) const;
};

/// Per-axis min-max map of inputs onto [0,1] and of values onto [-1,1].
struct NormalizationTransform {
    std::vector<double> in_min;
    std::vector<double> in_max;
    double out_min = 0.0;
    double out_max = 0.0;

    std::size_t dim() const { return in_min.size(); }

    void apply_point(std::span<double> x) const;
    PointSet apply_points(const PointSet& points) const;
    double apply_value(double v) const;
    double invert_value(double v) const;
    double invert_coordinate(std::size_t axis, double u) const;
};

std::pair<RawDataset, NormalizationTransform> normalize(const RawDataset& raw);

/// Jointly normalized data partitioned into train and validation parts.
struct SplitDataset {
    RawDataset train;
    RawDataset validation;
    NormalizationTransform transform;
    std::uint64_t seed = 0;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> validation_indices;
};

/// Normalizes `data` and partitions it: floor(N * ratio) rows go to train.
SplitDataset split(const RawDataset& data, double ratio, std::uint64_t seed);

/// Reads `x0,...,x{D-1},phi` CSV; requires at least two rows.
RawDataset load_csv(const std::filesystem::path& path);

/// Reads a query CSV: `x0,...,x{D-1}` with an optional trailing `phi` column.
/// Zero data rows are allowed; values are NaN when `phi` is absent.
RawDataset load_query_csv(const std::filesystem::path& path);

void save_csv(const RawDataset& data, const std::filesystem::path& path);

} // namespace kinreg

#endif // KINREG_DATASET_HPP

#include "kinreg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>

#include "kinreg/random.hpp"

namespace kinreg {

namespace {

std::string describe(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ", line " + std::to_string(line);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    if (text.empty())
        return false;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

// Returns the input dimension D and whether the trailing phi column exists.
std::pair<std::size_t, bool> parse_header(std::string_view header, const std::filesystem::path& path,
                                          bool phi_required) {
    const auto fields = split_fields(header);
    std::size_t dim = 0;
    bool has_phi = false;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = trim(fields[i]);
        if (i + 1 == fields.size() && name == "phi") {
            has_phi = true;
            break;
        }
        if (name != "x" + std::to_string(i))
            throw DataError(describe(path, 1) + ": bad header column '" + std::string(name) + "', expected 'x" +
                            std::to_string(i) + "'" + (i > 0 ? " or 'phi'" : ""));
        ++dim;
    }
    if (dim == 0)
        throw DataError(describe(path, 1) + ": header declares no coordinate columns");
    if (phi_required && !has_phi)
        throw DataError(describe(path, 1) + ": header is missing the trailing 'phi' column");
    return {dim, has_phi};
}

RawDataset read_csv(const std::filesystem::path& path, bool phi_required) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line) || trim(line).empty())
        throw DataError(describe(path, 1) + ": missing header");
    const auto [dim, has_phi] = parse_header(line, path, phi_required);
    const std::size_t ncols = dim + (has_phi ? 1 : 0);

    RawDataset data{PointSet(dim), {}};
    std::vector<double> row(ncols);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto fields = split_fields(line);
        if (fields.size() != ncols)
            throw DataError(describe(path, lineno) + ": expected " + std::to_string(ncols) + " fields, found " +
                            std::to_string(fields.size()));
        for (std::size_t c = 0; c < ncols; ++c) {
            if (!parse_double(fields[c], row[c]))
                throw DataError(describe(path, lineno) + ": non-numeric cell '" + std::string(trim(fields[c])) +
                                "' in column " + std::to_string(c));
        }
        data.points.push_back(std::span<const double>(row.data(), dim));
        data.values.push_back(has_phi ? row[dim] : std::nan(""));
    }
    return data;
}

} // namespace

void RawDataset::validate(std::size_t min_size) const {
    if (points.size() != values.size())
        throw DataError("dataset has " + std::to_string(points.size()) + " points but " +
                        std::to_string(values.size()) + " values");
    if (dim() == 0)
        throw DataError("dataset dimension must be positive");
    if (size() < min_size)
        throw DataError("dataset needs at least " + std::to_string(min_size) + " rows, has " +
                        std::to_string(size()));
    for (std::size_t i = 0; i < size(); ++i) {
        for (double c : points[i])
            if (!std::isfinite(c))
                throw DataError("non-finite coordinate at row " + std::to_string(i));
        if (!std::isfinite(values[i]))
            throw DataError("non-finite value at row " + std::to_string(i));
    }
}

RawDataset RawDataset::subset(std::span<const std::size_t> indices) const {
    RawDataset out{PointSet(dim()), {}};
    out.points.reserve(indices.size());
    out.values.reserve(indices.size());
    for (auto i : indices) {
        out.points.push_back(points[i]);
        out.values.push_back(values[i]);
    }
    return out;
}

void NormalizationTransform::apply_point(std::span<double> x) const {
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double range = in_max[k] - in_min[k];
        x[k] = range > 0.0 ? (x[k] - in_min[k]) / range : 0.5;
    }
}

PointSet NormalizationTransform::apply_points(const PointSet& points) const {
    if (points.dim() != dim())
        throw DataError("transform expects dimension " + std::to_string(dim()) + ", found " +
                        std::to_string(points.dim()));
    PointSet out = points;
    for (std::size_t i = 0; i < out.size(); ++i)
        apply_point(out[i]);
    return out;
}

double NormalizationTransform::apply_value(double v) const {
    const double range = out_max - out_min;
    return range > 0.0 ? 2.0 * (v - out_min) / range - 1.0 : v - out_min;
}

double NormalizationTransform::invert_value(double v) const {
    const double range = out_max - out_min;
    return range > 0.0 ? (v + 1.0) * 0.5 * range + out_min : v + out_min;
}

double NormalizationTransform::invert_coordinate(std::size_t axis, double u) const {
    const double range = in_max[axis] - in_min[axis];
    return range > 0.0 ? u * range + in_min[axis] : in_min[axis];
}

std::pair<RawDataset, NormalizationTransform> normalize(const RawDataset& raw) {
    raw.validate(1);
    const std::size_t dim = raw.dim();
    NormalizationTransform t;
    t.in_min.assign(dim, std::numeric_limits<double>::infinity());
    t.in_max.assign(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto p = raw.points[i];
        for (std::size_t k = 0; k < dim; ++k) {
            t.in_min[k] = std::min(t.in_min[k], p[k]);
            t.in_max[k] = std::max(t.in_max[k], p[k]);
        }
    }
    const auto [lo, hi] = std::minmax_element(raw.values.begin(), raw.values.end());
    t.out_min = *lo;
    t.out_max = *hi;

    RawDataset out{t.apply_points(raw.points), raw.values};
    for (auto& v : out.values)
        v = t.apply_value(v);
    return {std::move(out), std::move(t)};
}

SplitDataset split(const RawDataset& data, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0))
        throw UsageError("split ratio must lie in (0,1), got " + std::to_string(ratio));
    data.validate(2);
    const std::size_t n = data.size();
    const auto n_train = static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio + 1e-9));
    if (n_train == 0 || n_train == n)
        throw DataError("split of " + std::to_string(n) + " rows at ratio " + std::to_string(ratio) +
                        " leaves an empty part");

    auto [normalized, transform] = normalize(data);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));

    SplitDataset out;
    out.seed = seed;
    out.transform = std::move(transform);
    out.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.validation_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    std::sort(out.train_indices.begin(), out.train_indices.end());
    std::sort(out.validation_indices.begin(), out.validation_indices.end());
    out.train = normalized.subset(out.train_indices);
    out.validation = normalized.subset(out.validation_indices);
    return out;
}

RawDataset load_csv(const std::filesystem::path& path) {
    RawDataset data = read_csv(path, true);
    if (data.size() < 2)
        throw DataError(path.string() + ": need at least 2 data rows, found " + std::to_string(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) {
        bool finite = std::isfinite(data.values[i]);
        for (double c : data.points[i])
            finite = finite && std::isfinite(c);
        if (!finite)
            throw DataError(describe(path, i + 2) + ": non-finite entry");
    }
    return data;
}

RawDataset load_query_csv(const std::filesystem::path& path) {
    return read_csv(path, false);
}

void save_csv(const RawDataset& data, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write " + path.string());
    for (std::size_t k = 0; k < data.dim(); ++k)
        out << 'x' << k << ',';
    out << "phi\n";
    char buf[32];
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double c : data.points[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", c);
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", data.values[i]);
        out << buf << '\n';
    }
    if (!out)
        throw DataError("write failed for " + path.string());
}

} // namespace kinreg

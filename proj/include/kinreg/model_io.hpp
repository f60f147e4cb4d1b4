#ifndef KINREG_MODEL_IO_HPP
#define KINREG_MODEL_IO_HPP

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "kinreg/dataset.hpp"
#include "kinreg/interpolator.hpp"
#include "kinreg/rbf.hpp"
#include "kinreg/temperature.hpp"

namespace kinreg {

inline constexpr int kModelFormatVersion = 1;

/// How the stored temperature was chosen.
struct ModelMetadata {
    bool searched = false;
    std::string optimizer;       ///< "maxent", "mle" or "fixed"
    double d_typ = 0.0;          ///< 0 when not computed
    std::string stop_reason;
    std::vector<ThetaTracePoint> trace;
};

struct KineticModelFile {
    FittedModel model;
    NormalizationTransform transform;
    ModelMetadata meta;
};

struct RbfModelFile {
    RbfModel model;
    NormalizationTransform transform;
    ModelMetadata meta;
};

using ModelFile = std::variant<KineticModelFile, RbfModelFile>;

/// JSON with a "format_version" field; doubles are written with round-trip
/// precision so loading reproduces every stored number exactly.
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);

std::size_t model_dim(const ModelFile& file);

/// Predicts at raw (unnormalized) query points and maps the results back to
/// the original value scale. Throws DataError on a dimension mismatch.
std::vector<double> predict_raw(const ModelFile& file, const PointSet& raw_queries,
                                PredictReport* report = nullptr);

} // namespace kinreg

#endif // KINREG_MODEL_IO_HPP

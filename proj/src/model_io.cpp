#include "kinreg/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace kinreg {

namespace {

using nlohmann::json;

// JSON has no NaN or infinity; those are stored as strings.
json num(double v) {
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return "nan";
    return v > 0 ? "inf" : "-inf";
}

double get_num(const json& j) {
    if (j.is_number())
        return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
    }
    throw DataError("model file: expected a number, found " + j.dump());
}

json num_array(std::span<const double> v) {
    json a = json::array();
    for (double x : v)
        a.push_back(num(x));
    return a;
}

std::vector<double> get_array(const json& j) {
    if (!j.is_array())
        throw DataError("model file: expected an array, found " + j.dump().substr(0, 40));
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& x : j)
        out.push_back(get_num(x));
    return out;
}

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        throw DataError(std::string("model file: missing field '") + name + "'");
    return j.at(name);
}

json transform_json(const NormalizationTransform& t) {
    return {{"in_min", num_array(t.in_min)},
            {"in_max", num_array(t.in_max)},
            {"out_min", num(t.out_min)},
            {"out_max", num(t.out_max)}};
}

NormalizationTransform transform_from(const json& j) {
    NormalizationTransform t;
    t.in_min = get_array(field(j, "in_min"));
    t.in_max = get_array(field(j, "in_max"));
    t.out_min = get_num(field(j, "out_min"));
    t.out_max = get_num(field(j, "out_max"));
    if (t.in_min.size() != t.in_max.size())
        throw DataError("model file: transform bounds disagree in length");
    return t;
}

json meta_json(const ModelMetadata& m) {
    json trace = json::array();
    for (const auto& p : m.trace)
        trace.push_back({num(p.theta), num(p.rmse)});
    return {{"searched", m.searched},
            {"optimizer", m.optimizer},
            {"d_typ", num(m.d_typ)},
            {"stop_reason", m.stop_reason},
            {"trace", trace}};
}

ModelMetadata meta_from(const json& j) {
    ModelMetadata m;
    m.searched = field(j, "searched").get<bool>();
    m.optimizer = field(j, "optimizer").get<std::string>();
    m.d_typ = get_num(field(j, "d_typ"));
    m.stop_reason = field(j, "stop_reason").get<std::string>();
    for (const auto& p : field(j, "trace")) {
        if (!p.is_array() || p.size() != 2)
            throw DataError("model file: trace entries must be [theta, rmse] pairs");
        m.trace.push_back({get_num(p[0]), get_num(p[1])});
    }
    return m;
}

PointSet points_from(const json& j, std::size_t dim) {
    auto flat = get_array(j);
    if (dim == 0 || flat.size() % dim != 0)
        throw DataError("model file: point array does not match dimension " + std::to_string(dim));
    return PointSet(dim, std::move(flat));
}

json kinetic_json(const KineticModelFile& f) {
    const FittedModel& m = f.model;
    json corrections = json::array();
    for (const auto& c : m.self_corrections())
        corrections.push_back({{"delta", num_array(c.delta)},
                               {"residual_norm", num(c.residual_norm)},
                               {"iterations", c.iterations},
                               {"converged", c.converged}});
    const SolverConfig& s = m.solver_config();
    return {{"format_version", kModelFormatVersion},
            {"kind", "kinetic"},
            {"dim", m.dim()},
            {"theta", num(m.theta().value())},
            {"level", static_cast<int>(m.level())},
            {"solver", {{"tol_resid", num(s.tol_resid)}, {"max_iter", s.max_iter}, {"ridge", num(s.ridge)}}},
            {"train_points", num_array(m.train_points().flat())},
            {"train_values", num_array(m.train_values())},
            {"psi", num_array(m.psi())},
            {"self_corrections", corrections},
            {"transform", transform_json(f.transform)},
            {"meta", meta_json(f.meta)}};
}

json rbf_json(const RbfModelFile& f) {
    const RbfModel& m = f.model;
    return {{"format_version", kModelFormatVersion},
            {"kind", "rbf"},
            {"dim", m.centers.dim()},
            {"theta", num(m.theta.value())},
            {"ridge", num(m.ridge)},
            {"centers", num_array(m.centers.flat())},
            {"weights", num_array(m.weights)},
            {"transform", transform_json(f.transform)},
            {"meta", meta_json(f.meta)}};
}

KineticModelFile kinetic_from(const json& j) {
    const auto dim = field(j, "dim").get<std::size_t>();
    const json& sj = field(j, "solver");
    SolverConfig s;
    s.tol_resid = get_num(field(sj, "tol_resid"));
    s.max_iter = field(sj, "max_iter").get<int>();
    s.ridge = get_num(field(sj, "ridge"));
    std::vector<MomentCorrection> corrections;
    for (const auto& cj : field(j, "self_corrections")) {
        MomentCorrection c;
        c.delta = get_array(field(cj, "delta"));
        c.residual_norm = get_num(field(cj, "residual_norm"));
        c.iterations = field(cj, "iterations").get<int>();
        c.converged = field(cj, "converged").get<bool>();
        corrections.push_back(std::move(c));
    }
    FittedModel model(points_from(field(j, "train_points"), dim), get_array(field(j, "train_values")),
                      get_array(field(j, "psi")), Temperature(get_num(field(j, "theta"))),
                      correction_level_from_int(field(j, "level").get<int>()), s, std::move(corrections));
    return {std::move(model), transform_from(field(j, "transform")), meta_from(field(j, "meta"))};
}

RbfModelFile rbf_from(const json& j) {
    const auto dim = field(j, "dim").get<std::size_t>();
    RbfModel m;
    m.centers = points_from(field(j, "centers"), dim);
    m.weights = get_array(field(j, "weights"));
    m.theta = Temperature(get_num(field(j, "theta")));
    m.ridge = get_num(field(j, "ridge"));
    if (m.weights.size() != m.centers.size())
        throw DataError("model file: rbf weights and centers disagree in length");
    return {std::move(m), transform_from(field(j, "transform")), meta_from(field(j, "meta"))};
}

} // namespace

std::string model_to_json(const ModelFile& file) {
    const json j = std::visit(
        [](const auto& f) {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, KineticModelFile>)
                return kinetic_json(f);
            else
                return rbf_json(f);
        },
        file);
    return j.dump();
}

ModelFile model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const int version = field(j, "format_version").get<int>();
        if (version != kModelFormatVersion)
            throw DataError("unsupported model format version " + std::to_string(version));
        const auto kind = field(j, "kind").get<std::string>();
        if (kind == "kinetic")
            return kinetic_from(j);
        if (kind == "rbf")
            return rbf_from(j);
        throw DataError("unknown model kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const ModelFile& file, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    out << model_to_json(file) << '\n';
    if (!out)
        throw DataError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open model file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return model_from_json(ss.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::size_t model_dim(const ModelFile& file) {
    return std::visit(
        [](const auto& f) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, KineticModelFile>)
                return f.model.dim();
            else
                return f.model.centers.dim();
        },
        file);
}

std::vector<double> predict_raw(const ModelFile& file, const PointSet& raw_queries, PredictReport* report) {
    const std::size_t dim = model_dim(file);
    if (raw_queries.dim() != dim)
        throw DataError("dimension mismatch: model expects " + std::to_string(dim) + " input columns, found " +
                        std::to_string(raw_queries.dim()));
    std::vector<double> out;
    std::visit(
        [&](const auto& f) {
            const PointSet q = f.transform.apply_points(raw_queries);
            if constexpr (std::is_same_v<std::decay_t<decltype(f)>, KineticModelFile>) {
                out = f.model.predict(q, report);
            } else {
                out = rbf_predict(f.model, q);
                if (report)
                    *report = PredictReport{q.size(), 0, 0.0};
            }
            for (auto& v : out)
                v = f.transform.invert_value(v);
        },
        file);
    return out;
}

} // namespace kinreg

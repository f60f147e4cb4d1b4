#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kinreg/benchfn.hpp"
#include "kinreg/interpolator.hpp"
#include "kinreg/model_io.hpp"
#include "kinreg/random.hpp"
#include "kinreg/rbf.hpp"
#include "kinreg/temperature.hpp"

namespace py = pybind11;
using namespace kinreg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointSet to_points(const Array& a) {
    if (a.ndim() == 1)
        return PointSet(1, std::vector<double>(a.data(), a.data() + a.shape(0)));
    if (a.ndim() != 2)
        throw DataError("points must be a 1-D or 2-D array");
    const auto n = static_cast<std::size_t>(a.shape(0)), d = static_cast<std::size_t>(a.shape(1));
    return PointSet(d, std::vector<double>(a.data(), a.data() + n * d));
}

std::vector<double> to_values(const Array& a) {
    if (a.ndim() != 1)
        throw DataError("values must be a 1-D array");
    return {a.data(), a.data() + a.shape(0)};
}

RawDataset to_dataset(const Array& points, const Array& values) {
    RawDataset d{to_points(points), to_values(values)};
    if (d.points.size() != d.values.size())
        throw DataError("points and values have different lengths");
    return d;
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const PointSet& p) {
    py::array_t<double> out({static_cast<py::ssize_t>(p.size()), static_cast<py::ssize_t>(p.dim())});
    std::copy(p.flat().begin(), p.flat().end(), out.mutable_data());
    return out;
}

py::dict search_dict(const ThetaSearchResult& r) {
    py::list trace;
    for (const auto& t : r.trace)
        trace.append(py::make_tuple(t.theta, t.rmse));
    py::dict d;
    d["theta"] = r.theta_opt.value();
    d["d_typ"] = r.d_typ;
    d["stop_reason"] = to_string(r.stop_reason);
    d["trace"] = trace;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Kinetic-regularization scattered-data interpolation";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<FittedModel>(m, "KineticModel")
        .def(
            "predict",
            [](const FittedModel& model, const Array& queries) {
                PredictReport report;
                std::vector<double> out;
                {
                    py::gil_scoped_release release;
                    out = model.predict(to_points(queries), &report);
                }
                return py::make_tuple(to_array(out), report.n_failed_corrections);
            },
            py::arg("queries"),
            "Returns (predictions, number of queries whose moment solve failed).")
        .def_property_readonly("theta", [](const FittedModel& model) { return model.theta().value(); })
        .def_property_readonly("level", [](const FittedModel& model) { return static_cast<int>(model.level()); })
        .def_property_readonly("dim", &FittedModel::dim)
        .def_property_readonly("psi", [](const FittedModel& model) { return to_array(model.psi()); })
        .def_property_readonly("train_points", [](const FittedModel& model) { return to_array(model.train_points()); })
        .def_property_readonly("n_failed_corrections",
                               [](const FittedModel& model) { return model.report().n_failed_corrections; })
        .def("__len__", &FittedModel::size);

    py::class_<RbfModel>(m, "RbfModel")
        .def(
            "predict", [](const RbfModel& model, const Array& q) { return to_array(rbf_predict(model, to_points(q))); },
            py::arg("queries"))
        .def_property_readonly("theta", [](const RbfModel& model) { return model.theta.value(); })
        .def_property_readonly("weights", [](const RbfModel& model) { return to_array(model.weights); })
        .def_readonly("ridge", &RbfModel::ridge);

    m.def(
        "fit",
        [](const Array& points, const Array& values, double theta, int level) {
            const RawDataset d = to_dataset(points, values);
            const CorrectionLevel lv = correction_level_from_int(level);
            py::gil_scoped_release release;
            return fit(d, Temperature(theta), lv);
        },
        py::arg("points"), py::arg("values"), py::arg("theta"), py::arg("level") = 2,
        "Fits on points assumed to lie in [0,1]^D.");

    m.def(
        "rbf_fit",
        [](const Array& points, const Array& values, double theta, double ridge) {
            return rbf_fit(to_dataset(points, values), Temperature(theta), ridge);
        },
        py::arg("points"), py::arg("values"), py::arg("theta"), py::arg("ridge") = 0.0);

    m.def(
        "normalize",
        [](const Array& points, const Array& values) {
            const auto [d, t] = normalize(to_dataset(points, values));
            py::dict transform;
            transform["in_min"] = t.in_min;
            transform["in_max"] = t.in_max;
            transform["out_min"] = t.out_min;
            transform["out_max"] = t.out_max;
            return py::make_tuple(to_array(d.points), to_array(d.values), transform);
        },
        py::arg("points"), py::arg("values"),
        "Min-max maps inputs to [0,1] and values to [-1,1]; returns (points, values, transform).");

    m.def(
        "search_theta",
        [](const Array& points, const Array& values, int level, double split_ratio, std::uint64_t seed,
           const std::string& optimizer) {
            const SplitDataset sp = split(to_dataset(points, values), split_ratio, seed);
            const CorrectionLevel lv = correction_level_from_int(level);
            py::gil_scoped_release release;
            if (optimizer == "mle")
                return search_theta_mle(sp, lv);
            if (optimizer != "maxent")
                throw UsageError("optimizer must be 'maxent' or 'mle'");
            ThetaSearchConfig cfg;
            cfg.level = lv;
            return search_theta(sp, cfg);
        },
        py::arg("points"), py::arg("values"), py::arg("level") = 2, py::arg("split_ratio") = 0.8,
        py::arg("seed") = 0, py::arg("optimizer") = "maxent");
    py::class_<ThetaSearchResult>(m, "ThetaSearchResult")
        .def_property_readonly("theta", [](const ThetaSearchResult& r) { return r.theta_opt.value(); })
        .def_readonly("d_typ", &ThetaSearchResult::d_typ)
        .def_property_readonly("stop_reason", [](const ThetaSearchResult& r) { return to_string(r.stop_reason); })
        .def_property_readonly("best_rmse", &ThetaSearchResult::best_rmse)
        .def("as_dict", &search_dict);

    m.def(
        "benchmark",
        [](const std::string& name, const Array& x, std::size_t dim, unsigned terms) {
            const auto fn = BenchmarkFunction::from_name(name, dim, terms);
            const PointSet p = to_points(x);
            std::vector<double> out(p.size());
            for (std::size_t i = 0; i < p.size(); ++i)
                out[i] = fn(p[i]);
            return to_array(out);
        },
        py::arg("name"), py::arg("x"), py::arg("dim") = 0, py::arg("terms") = 3,
        "Evaluates a named test function at each row of x.");

    m.def(
        "sample",
        [](const std::string& name, std::size_t n, std::uint64_t seed, std::size_t dim, double noise) {
            const auto fn = BenchmarkFunction::from_name(name, dim);
            RawDataset d = sample(fn, n, SamplingMode::UniformRandom, seed);
            if (noise > 0.0)
                d = add_noise(std::move(d), NoiseSpec{noise, 1.0 / 3.0, 0.0, derive_seed(seed, 1)});
            return py::make_tuple(to_array(d.points), to_array(d.values));
        },
        py::arg("name"), py::arg("n"), py::arg("seed") = 0, py::arg("dim") = 0, py::arg("noise") = 0.0);

    m.def(
        "predict_model_file",
        [](const std::string& path, const Array& queries) {
            return to_array(predict_raw(load_model(path), to_points(queries)));
        },
        py::arg("path"), py::arg("queries"), "Predicts with a model file written by the command-line tool.");
}

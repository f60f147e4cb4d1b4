#include "kinreg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "json.hpp"
#include "kinreg/metrics.hpp"
#include "kinreg/random.hpp"
#include "kinreg/rbf.hpp"

namespace kinreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Streams for derive_seed; fixed so that results stay reproducible.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kTestStream = 3;
constexpr std::uint64_t kHoldoutStream = 4;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open " + path.string() + " for writing");
    return out;
}

struct Prepared {
    SplitDataset split;
    RawDataset test;     ///< raw coordinates, truth on the original scale
    std::size_t dim = 0;
};

Prepared prepare(const BenchmarkConfig& cfg, std::uint64_t seed) {
    Prepared p;
    RawDataset train;
    if (cfg.csv) {
        const RawDataset all = load_csv(*cfg.csv);
        std::vector<std::size_t> idx(all.size());
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng(derive_seed(seed, kHoldoutStream));
        rng.shuffle(std::span<std::size_t>(idx));
        const auto n_test = static_cast<std::size_t>(std::floor(0.2 * static_cast<double>(all.size())));
        if (n_test == 0)
            throw DataError("CSV has too few rows to hold out a test set");
        std::vector<std::size_t> test_idx(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
        std::vector<std::size_t> train_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
        std::sort(test_idx.begin(), test_idx.end());
        std::sort(train_idx.begin(), train_idx.end());
        p.test = all.subset(test_idx);
        train = all.subset(train_idx);
        if (cfg.noise_s > 0.0)
            train = add_noise(std::move(train), NoiseSpec{cfg.noise_s, 1.0 / 3.0, 0.0, derive_seed(seed, kNoiseStream)});
    } else {
        const auto fn = BenchmarkFunction::from_name(cfg.function, cfg.dim, cfg.terms);
        train = benchmark_training_data(fn, cfg, seed);
        p.test = benchmark_test_set(fn, cfg.test_n, seed);
    }
    p.dim = train.dim();
    p.split = split(train, cfg.split_ratio, seed);
    return p;
}

ResultRow base_row(const BenchmarkConfig& cfg, const Prepared& p, std::uint64_t seed) {
    ResultRow r;
    r.function = cfg.csv ? cfg.csv->filename().string() : BenchmarkFunction::from_name(cfg.function, cfg.dim, cfg.terms).name();
    r.dim = p.dim;
    r.n = p.split.train.size() + p.split.validation.size();
    r.seed = seed;
    r.s = cfg.noise_s;
    return r;
}

void score(ResultRow& row, const Prepared& p, const std::vector<double>& pred_normalized) {
    std::vector<double> pred(pred_normalized.size());
    for (std::size_t i = 0; i < pred.size(); ++i)
        pred[i] = p.split.transform.invert_value(pred_normalized[i]);
    const MetricReport m = compute_metrics(pred, p.test.values);
    row.rmse = m.rmse;
    row.l1_mean = m.l1_mean;
    row.linf = m.linf;
    row.r2 = m.r2;
}

void mark_failed(ResultRow& row, const std::string& what) {
    row.error = what;
    row.rmse = row.l1_mean = row.linf = kNaN;
    row.r2.reset();
}

ResultRow run_kinetic(const BenchmarkConfig& cfg, const Prepared& p, std::uint64_t seed, CorrectionLevel level) {
    ResultRow row = base_row(cfg, p, seed);
    row.method = Method::Kinetic;
    row.level = level;
    try {
        auto t0 = std::chrono::steady_clock::now();
        ThetaSearchResult search;
        if (cfg.optimizer == Optimizer::Mle) {
            search = search_theta_mle(p.split, level, cfg.cg, cfg.search.solver);
        } else {
            ThetaSearchConfig sc = cfg.search;
            sc.level = level;
            search = search_theta(p.split, sc);
        }
        row.search_seconds = seconds_since(t0);
        row.theta_opt = search.theta_opt.value();
        row.theta_over_dtyp2 = row.theta_opt / (search.d_typ * search.d_typ);
        row.validation_rmse = search.best_rmse();

        t0 = std::chrono::steady_clock::now();
        const FittedModel model = fit(p.split.train, search.theta_opt, level, cfg.search.solver);
        row.fit_seconds = seconds_since(t0);

        const PointSet queries = p.split.transform.apply_points(p.test.points);
        PredictReport pr;
        t0 = std::chrono::steady_clock::now();
        const auto pred = model.predict(queries, &pr);
        row.predict_seconds = seconds_since(t0);
        row.n_failed_corrections = model.report().n_failed_corrections + pr.n_failed_corrections;
        score(row, p, pred);
    } catch (const std::exception& e) {
        mark_failed(row, e.what());
    }
    return row;
}

ResultRow run_rbf(const BenchmarkConfig& cfg, const Prepared& p, std::uint64_t seed) {
    ResultRow row = base_row(cfg, p, seed);
    row.method = Method::Rbf;
    try {
        auto t0 = std::chrono::steady_clock::now();
        const RbfTuneResult tuned = rbf_tune(p.split, cfg.search);
        row.search_seconds = seconds_since(t0);
        row.theta_opt = tuned.theta.value();
        row.theta_over_dtyp2 = row.theta_opt / (tuned.search.d_typ * tuned.search.d_typ);
        row.validation_rmse = tuned.rmse;

        t0 = std::chrono::steady_clock::now();
        const RbfModel model = rbf_fit(p.split.train, tuned.theta);
        row.fit_seconds = seconds_since(t0);

        const PointSet queries = p.split.transform.apply_points(p.test.points);
        t0 = std::chrono::steady_clock::now();
        const auto pred = rbf_predict(model, queries);
        row.predict_seconds = seconds_since(t0);
        score(row, p, pred);
    } catch (const std::exception& e) {
        mark_failed(row, e.what());
    }
    return row;
}

int level_key(const ResultRow& r) { return r.level ? static_cast<int>(*r.level) : -1; }

} // namespace

std::string to_string(Method m) { return m == Method::Kinetic ? "kinetic" : "rbf"; }
std::string to_string(Optimizer o) { return o == Optimizer::MaxEnt ? "maxent" : "mle"; }

Method method_from_string(const std::string& s) {
    if (s == "kinetic")
        return Method::Kinetic;
    if (s == "rbf")
        return Method::Rbf;
    throw UsageError("unknown method '" + s + "' (expected kinetic or rbf)");
}

Optimizer optimizer_from_string(const std::string& s) {
    if (s == "maxent")
        return Optimizer::MaxEnt;
    if (s == "mle")
        return Optimizer::Mle;
    throw UsageError("unknown optimizer '" + s + "' (expected maxent or mle)");
}

RawDataset benchmark_training_data(const BenchmarkFunction& fn, const BenchmarkConfig& cfg, std::uint64_t seed) {
    RawDataset data = sample(fn, cfg.n, cfg.sampling, seed);
    if (cfg.noise_s > 0.0)
        data = add_noise(std::move(data), NoiseSpec{cfg.noise_s, 1.0 / 3.0, 0.0, derive_seed(seed, kNoiseStream)});
    return data;
}

RawDataset benchmark_test_set(const BenchmarkFunction& fn, std::size_t test_n, std::uint64_t seed) {
    if (test_n < 2)
        throw UsageError("test set needs at least 2 points");
    return sample(fn, test_n, SamplingMode::UniformRandom, derive_seed(seed, kTestStream));
}

std::vector<ResultRow> run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.seeds.empty())
        throw UsageError("benchmark needs at least one seed");
    std::vector<ResultRow> rows;
    for (const auto seed : cfg.seeds) {
        const Prepared p = prepare(cfg, seed);
        for (const Method m : cfg.methods) {
            if (m == Method::Rbf) {
                rows.push_back(run_rbf(cfg, p, seed));
                continue;
            }
            for (const CorrectionLevel level : cfg.levels)
                rows.push_back(run_kinetic(cfg, p, seed, level));
        }
    }

    std::map<std::uint64_t, double> baseline;
    for (const auto& r : rows)
        if (r.method == Method::Kinetic && r.level == CorrectionLevel::None && r.error.empty())
            baseline[r.seed] = r.rmse;
    for (auto& r : rows) {
        const auto it = baseline.find(r.seed);
        if (it != baseline.end() && r.error.empty() && r.rmse > 0.0)
            r.ratio = it->second / r.rmse;
    }

    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.method != b.method)
            return a.method < b.method;
        if (level_key(a) != level_key(b))
            return level_key(a) < level_key(b);
        return a.seed < b.seed;
    });
    return rows;
}

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "schema_version,function,method,level,D,N,seed,s,theta_opt,theta_over_dtyp2,validation_rmse,rmse,"
           "l1_mean,linf,r2,fit_seconds,search_seconds,predict_seconds,n_failed_corrections,ratio,error\n";
    for (const auto& r : rows) {
        out << kResultSchemaVersion << ',' << csv_safe(r.function) << ',' << to_string(r.method) << ','
            << (r.level ? std::to_string(static_cast<int>(*r.level)) : "") << ',' << r.dim << ',' << r.n << ','
            << r.seed << ',' << fmt(r.s) << ',' << fmt(r.theta_opt) << ',' << fmt(r.theta_over_dtyp2) << ','
            << fmt(r.validation_rmse) << ',' << fmt(r.rmse) << ',' << fmt(r.l1_mean) << ',' << fmt(r.linf) << ','
            << (r.r2 ? fmt(*r.r2) : "") << ',' << fmt(r.fit_seconds) << ',' << fmt(r.search_seconds) << ','
            << fmt(r.predict_seconds) << ',' << r.n_failed_corrections << ',' << (r.ratio ? fmt(*r.ratio) : "")
            << ',' << csv_safe(r.error) << '\n';
    }
    if (!out)
        throw DataError("failed writing " + path.string());
}

std::string results_summary_json(const BenchmarkConfig& cfg, const std::vector<ResultRow>& rows) {
    using nlohmann::json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : json(nullptr); };

    json j;
    j["schema_version"] = kResultSchemaVersion;
    json c;
    c["function"] = cfg.csv ? cfg.csv->string() : cfg.function;
    c["dim"] = rows.empty() ? cfg.dim : rows.front().dim;
    c["n"] = cfg.n;
    c["seeds"] = cfg.seeds;
    c["noise_s"] = cfg.noise_s;
    c["optimizer"] = to_string(cfg.optimizer);
    c["test_n"] = cfg.test_n;
    c["split_ratio"] = cfg.split_ratio;
    c["rmse_normalizer"] = "max |truth| over the test set";
    c["rbf"] = "unnormalized Gaussian, ridge escalation 0, 1e-10, 1e-8";
    j["config"] = c;

    json rows_j = json::array();
    for (const auto& r : rows) {
        rows_j.push_back({{"function", r.function},
                          {"method", to_string(r.method)},
                          {"level", r.level ? json(static_cast<int>(*r.level)) : json(nullptr)},
                          {"D", r.dim},
                          {"N", r.n},
                          {"seed", r.seed},
                          {"s", r.s},
                          {"theta_opt", num(r.theta_opt)},
                          {"theta_over_dtyp2", num(r.theta_over_dtyp2)},
                          {"validation_rmse", num(r.validation_rmse)},
                          {"rmse", num(r.rmse)},
                          {"l1_mean", num(r.l1_mean)},
                          {"linf", num(r.linf)},
                          {"r2", opt(r.r2)},
                          {"fit_seconds", r.fit_seconds},
                          {"search_seconds", r.search_seconds},
                          {"predict_seconds", r.predict_seconds},
                          {"n_failed_corrections", r.n_failed_corrections},
                          {"ratio", opt(r.ratio)},
                          {"error", r.error}});
    }
    j["rows"] = rows_j;

    // Aggregates per (method, level) over the seeds that succeeded.
    std::map<std::pair<int, int>, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
        groups[{static_cast<int>(r.method), level_key(r)}].push_back(&r);
    auto stats = [&](const std::vector<const ResultRow*>& g, auto get) {
        std::vector<double> v;
        for (const auto* r : g) {
            const std::optional<double> x = get(*r);
            if (r->error.empty() && x && std::isfinite(*x))
                v.push_back(*x);
        }
        json s;
        s["count"] = v.size();
        if (v.empty()) {
            s["mean"] = nullptr;
            s["std"] = nullptr;
            return s;
        }
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v)
            var += (x - mean) * (x - mean);
        s["mean"] = mean;
        s["std"] = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
        return s;
    };
    json groups_j = json::array();
    for (const auto& [key, g] : groups) {
        json gj;
        gj["method"] = to_string(static_cast<Method>(key.first));
        gj["level"] = key.second < 0 ? json(nullptr) : json(key.second);
        gj["n_rows"] = g.size();
        gj["n_failed_rows"] = std::count_if(g.begin(), g.end(), [](const ResultRow* r) { return !r->error.empty(); });
        gj["rmse"] = stats(g, [](const ResultRow& r) -> std::optional<double> { return r.rmse; });
        gj["l1_mean"] = stats(g, [](const ResultRow& r) -> std::optional<double> { return r.l1_mean; });
        gj["linf"] = stats(g, [](const ResultRow& r) -> std::optional<double> { return r.linf; });
        gj["r2"] = stats(g, [](const ResultRow& r) { return r.r2; });
        gj["ratio"] = stats(g, [](const ResultRow& r) { return r.ratio; });
        gj["theta_over_dtyp2"] =
            stats(g, [](const ResultRow& r) -> std::optional<double> { return r.theta_over_dtyp2; });
        gj["validation_rmse"] =
            stats(g, [](const ResultRow& r) -> std::optional<double> { return r.validation_rmse; });
        groups_j.push_back(gj);
    }
    j["groups"] = groups_j;
    return j.dump(2);
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
        throw UsageError("theta grid bounds must be positive and finite");
    if (points == 0)
        throw UsageError("theta grid needs at least one point");
    if (points == 1)
        return {lo};
    std::vector<double> g(points);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    RawDataset data;
    if (cfg.csv) {
        data = load_csv(*cfg.csv);
        if (cfg.noise_s > 0.0)
            data = add_noise(std::move(data), NoiseSpec{cfg.noise_s, 1.0 / 3.0, 0.0, derive_seed(cfg.seed, kNoiseStream)});
    } else {
        BenchmarkConfig bc;
        bc.n = cfg.n;
        bc.sampling = cfg.sampling;
        bc.noise_s = cfg.noise_s;
        data = benchmark_training_data(BenchmarkFunction::from_name(cfg.function, cfg.dim, cfg.terms), bc, cfg.seed);
    }
    const SplitDataset sp = split(data, cfg.split_ratio, cfg.seed);
    const double dt = d_typ(sp.train.points, std::min<int>(5, static_cast<int>(sp.train.size()) - 1));
    const double hi = cfg.theta_max ? *cfg.theta_max : theta_initial(sp.train.points).value();
    const auto grid = log_grid(cfg.theta_min, hi, cfg.points);

    std::vector<SweepRow> rows;
    for (const double theta : grid) {
        for (const CorrectionLevel level : cfg.levels) {
            SweepRow r;
            r.theta = theta;
            r.theta_over_dtyp2 = theta / (dt * dt);
            r.level = level;
            const FittedModel model = fit(sp.train, Temperature(theta), level, cfg.solver);
            PredictReport pr;
            const auto pred = model.predict(sp.validation.points, &pr);
            r.validation_rmse = normalized_rmse(pred, sp.validation.values);
            r.n_failed_corrections = model.report().n_failed_corrections + pr.n_failed_corrections;
            rows.push_back(r);
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "schema_version,theta,theta_over_dtyp2,level,validation_rmse,n_failed_corrections\n";
    for (const auto& r : rows)
        out << kResultSchemaVersion << ',' << fmt(r.theta) << ',' << fmt(r.theta_over_dtyp2) << ','
            << static_cast<int>(r.level) << ',' << fmt(r.validation_rmse) << ',' << r.n_failed_corrections << '\n';
    if (!out)
        throw DataError("failed writing " + path.string());
}

} // namespace kinreg

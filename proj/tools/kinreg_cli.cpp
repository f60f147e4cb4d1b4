// kinreg command-line tool: generate, fit, predict, benchmark, sweep-theta.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kinreg/benchfn.hpp"
#include "kinreg/dataset.hpp"
#include "kinreg/experiment.hpp"
#include "kinreg/interpolator.hpp"
#include "kinreg/model_io.hpp"
#include "kinreg/parallel.hpp"
#include "kinreg/rbf.hpp"
#include "kinreg/temperature.hpp"

using namespace kinreg;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

SamplingMode sampling_from_string(const std::string& s) {
    if (s == "uniform" || s == "random")
        return SamplingMode::UniformRandom;
    if (s == "grid")
        return SamplingMode::RegularGrid;
    throw UsageError("unknown sampling mode '" + s + "' (expected uniform or grid)");
}

std::vector<CorrectionLevel> levels_from(const std::vector<int>& v) {
    std::vector<CorrectionLevel> out;
    for (int l : v)
        out.push_back(correction_level_from_int(l));
    if (out.empty())
        throw UsageError("at least one correction level is needed");
    return out;
}

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> s;
    for (std::size_t i = 0; i < count; ++i)
        s.push_back(first + i);
    return s;
}

// Named experiment setups; explicit flags override any field.
struct Preset {
    std::string description;
    std::string function;
    std::size_t dim = 0;
    unsigned terms = 3;
    std::vector<std::size_t> n;
    std::size_t seeds = 5;
    double noise = 0.0;
    std::vector<int> levels{0, 1, 2};
    std::vector<std::string> methods{"kinetic"};
    std::string sampling = "uniform";
};

const std::map<std::string, Preset>& presets() {
    static const std::map<std::string, Preset> p = {
        {"franke-levels", {"Franke 2D, N=2000, correction levels 0/1/2", "franke2d", 2, 3, {2000}, 5, 0.0, {0, 1, 2}}},
        {"camel-1d", {"camel D=1, N=100..800", "camel", 1, 3, {100, 200, 400, 800}, 5, 0.0, {0, 2}}},
        {"camel-3d", {"camel D=3, N=1000..4000", "camel", 3, 3, {1000, 2000, 4000}, 3, 0.0, {0, 2}}},
        {"camel-6d", {"camel D=6, N=1000 and 8000", "camel", 6, 3, {1000, 8000}, 2, 0.0, {0, 2}}},
        {"ackley-6d", {"Ackley 6D, N=2000..8000", "ackley6d", 6, 3, {2000, 4000, 8000}, 2, 0.0, {0, 2}}},
        {"franke-sizes", {"Franke 2D, N=500..4000, run with --optimizer mle to compare", "franke2d", 2, 3,
                    {500, 1000, 2000, 4000}, 1, 0.0, {0, 2}}},
        {"weierstrass-rbf", {"Weierstrass I=3, N=40, kinetic vs RBF", "weierstrass", 1, 3, {40}, 5, 0.0, {2},
                  {"kinetic", "rbf"}}},
        {"weierstrass-rbf-grid", {"Weierstrass I=3, N=40 regular grid, kinetic vs RBF", "weierstrass", 1, 3, {40}, 5, 0.0,
                       {2}, {"kinetic", "rbf"}, "grid"}},
        {"franke-noisy", {"noisy Franke s=0.05, N=1000, kinetic vs RBF", "franke2d", 2, 3, {1000}, 5, 0.05, {0, 2},
                  {"kinetic", "rbf"}}},
        {"franke-noisy-strong", {"noisy Franke s=0.2, N=1000, kinetic vs RBF", "franke2d", 2, 3, {1000}, 5, 0.2, {0, 2},
                         {"kinetic", "rbf"}}},
    };
    return p;
}

std::string preset_help() {
    std::string s = "named experiment:";
    for (const auto& [name, p] : presets())
        s += "\n  " + name + ": " + p.description;
    return s;
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot open " + path + " for writing");
    out << text;
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateOpts {
    std::string function = "franke2d";
    std::size_t dim = 0;
    unsigned terms = 3;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    std::string sampling = "uniform";
    double noise = 0.0;
    std::string out = "data.csv";
    std::string test_out;
    std::size_t test_n = 10000;
};

int cmd_generate(const GenerateOpts& o) {
    const auto fn = BenchmarkFunction::from_name(o.function, o.dim, o.terms);
    BenchmarkConfig bc;
    bc.n = o.n;
    bc.sampling = sampling_from_string(o.sampling);
    bc.noise_s = o.noise;
    save_csv(benchmark_training_data(fn, bc, o.seed), o.out);
    std::cout << "wrote " << o.n << " rows of " << fn.name() << " (D=" << fn.dim() << ") to " << o.out << "\n";
    if (!o.test_out.empty()) {
        save_csv(benchmark_test_set(fn, o.test_n, o.seed), o.test_out);
        std::cout << "wrote " << o.test_n << " noiseless test rows to " << o.test_out << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- fit

struct FitOpts {
    std::string data;
    std::string model = "model.json";
    int level = 2;
    std::string method = "kinetic";
    std::string optimizer = "maxent";
    double theta = 0.0;
    bool no_search = false;
    double split_ratio = 0.8;
    std::uint64_t seed = 0;
    double alpha = 0.5;
    int max_iters = 50;
    double rel_tol = 1e-3;
    int knn_k = 5;
};

int cmd_fit(const FitOpts& o, bool theta_given) {
    if (o.no_search && !theta_given)
        throw UsageError("--no-search needs --theta");
    const RawDataset raw = load_csv(o.data);
    const Method method = method_from_string(o.method);
    const Optimizer optimizer = optimizer_from_string(o.optimizer);
    const CorrectionLevel level = correction_level_from_int(o.level);

    ThetaSearchConfig sc;
    sc.alpha = o.alpha;
    sc.max_iters = o.max_iters;
    sc.rel_tol = o.rel_tol;
    sc.knn_k = o.knn_k;
    sc.level = level;

    ModelMetadata meta;
    RawDataset train;
    NormalizationTransform transform;
    Temperature theta{1.0};

    if (o.no_search) {
        // Fixed temperature: every row is training data.
        auto [norm, t] = normalize(raw);
        train = std::move(norm);
        transform = std::move(t);
        theta = Temperature(o.theta);
        meta.optimizer = "fixed";
        meta.d_typ = d_typ(train.points, std::min<int>(o.knn_k, static_cast<int>(train.size()) - 1));
    } else {
        const SplitDataset sp = split(raw, o.split_ratio, o.seed);
        ThetaSearchResult search;
        if (method == Method::Rbf) {
            search = rbf_tune(sp, sc).search;
        } else if (optimizer == Optimizer::Mle) {
            search = search_theta_mle(sp, level, CgConfig{}, sc.solver);
        } else {
            search = search_theta(sp, sc);
        }
        theta = search.theta_opt;
        meta.searched = true;
        meta.optimizer = method == Method::Rbf ? "maxent" : to_string(optimizer);
        meta.d_typ = search.d_typ;
        meta.stop_reason = to_string(search.stop_reason);
        meta.trace = search.trace;
        train = sp.train;
        transform = sp.transform;
    }

    std::cout << "theta " << g17(theta.value()) << "\n";
    std::cout << "theta_over_dtyp2 " << g17(theta.value() / (meta.d_typ * meta.d_typ)) << "\n";
    if (meta.searched)
        std::cout << "candidates " << meta.trace.size() << " stop " << meta.stop_reason << "\n";

    if (method == Method::Rbf) {
        RbfModel m = rbf_fit(train, theta);
        std::cout << "method rbf ridge " << g17(m.ridge) << "\n";
        save_model(RbfModelFile{std::move(m), transform, meta}, o.model);
    } else {
        FittedModel m = fit(train, theta, level, sc.solver);
        const FitReport r = m.report();
        std::cout << "method kinetic level " << o.level << " failed_corrections " << r.n_failed_corrections
                  << " max_residual " << g17(r.max_residual) << "\n";
        save_model(KineticModelFile{std::move(m), transform, meta}, o.model);
    }
    std::cout << "model written to " << o.model << "\n";
    return kOk;
}

// ---------------------------------------------------------------- predict

struct PredictOpts {
    std::string model;
    std::string queries;
    std::string out = "predictions.csv";
};

int cmd_predict(const PredictOpts& o) {
    const ModelFile model = load_model(o.model);
    const RawDataset q = load_query_csv(o.queries);
    const std::size_t dim = model_dim(model);
    if (q.dim() != dim)
        throw DataError("dimension mismatch: model expects " + std::to_string(dim) + " input columns, " + o.queries +
                        " has " + std::to_string(q.dim()));
    PredictReport report;
    const auto pred = predict_raw(model, q.points, &report);

    std::ofstream out(o.out);
    if (!out)
        throw DataError("cannot open " + o.out + " for writing");
    for (std::size_t k = 0; k < dim; ++k)
        out << 'x' << k << ',';
    out << "phi\n";
    for (std::size_t i = 0; i < pred.size(); ++i) {
        for (std::size_t k = 0; k < dim; ++k)
            out << g17(q.points[i][k]) << ',';
        out << g17(pred[i]) << '\n';
    }
    if (!out)
        throw DataError("failed writing " + o.out);
    std::cout << "predicted " << pred.size() << " rows, failed_corrections " << report.n_failed_corrections
              << ", written to " << o.out << "\n";
    return kOk;
}

// ---------------------------------------------------------------- benchmark

struct BenchOpts {
    std::string preset;
    std::string function = "franke2d";
    std::string data;
    std::size_t dim = 0;
    unsigned terms = 3;
    std::vector<std::size_t> n{2000};
    std::size_t seeds = 5;
    std::uint64_t first_seed = 0;
    double noise = 0.0;
    std::vector<int> levels{0, 1, 2};
    std::vector<std::string> methods{"kinetic"};
    std::string optimizer = "maxent";
    std::string sampling = "uniform";
    std::size_t test_n = 10000;
    double alpha = 0.5;
    int max_iters = 50;
    double rel_tol = 1e-3;
    std::string out = "results.csv";
    std::string summary;
};

void print_rows(const std::vector<ResultRow>& rows) {
    std::printf("%-8s %5s %7s %5s %12s %12s %10s %8s\n", "method", "level", "N", "seed", "theta/d^2", "rmse",
                "ratio", "failed");
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::printf("%-8s %5s %7zu %5llu  error: %s\n", to_string(r.method).c_str(),
                        r.level ? std::to_string(static_cast<int>(*r.level)).c_str() : "-", r.n,
                        static_cast<unsigned long long>(r.seed), r.error.c_str());
            continue;
        }
        std::printf("%-8s %5s %7zu %5llu %12.4g %12.4e %10s %8zu\n", to_string(r.method).c_str(),
                    r.level ? std::to_string(static_cast<int>(*r.level)).c_str() : "-", r.n,
                    static_cast<unsigned long long>(r.seed), r.theta_over_dtyp2, r.rmse,
                    r.ratio ? std::to_string(*r.ratio).substr(0, 7).c_str() : "-", r.n_failed_corrections);
    }
}

int cmd_benchmark(BenchOpts o, const CLI::App& sub) {
    if (!o.preset.empty()) {
        const auto it = presets().find(o.preset);
        if (it == presets().end())
            throw UsageError("unknown preset '" + o.preset + "'");
        const Preset& p = it->second;
        auto unset = [&](const char* name) { return sub.count(name) == 0; };
        if (unset("--function"))
            o.function = p.function;
        if (unset("--dim"))
            o.dim = p.dim;
        if (unset("--terms"))
            o.terms = p.terms;
        if (unset("--n"))
            o.n = p.n;
        if (unset("--seeds"))
            o.seeds = p.seeds;
        if (unset("--noise"))
            o.noise = p.noise;
        if (unset("--levels"))
            o.levels = p.levels;
        if (unset("--methods"))
            o.methods = p.methods;
        if (unset("--sampling"))
            o.sampling = p.sampling;
    }

    BenchmarkConfig cfg;
    cfg.function = o.function;
    cfg.dim = o.dim;
    cfg.terms = o.terms;
    if (!o.data.empty())
        cfg.csv = o.data;
    cfg.seeds = seed_range(o.first_seed, o.seeds);
    if (cfg.seeds.empty())
        throw UsageError("--seeds must be at least 1");
    cfg.noise_s = o.noise;
    cfg.levels = levels_from(o.levels);
    cfg.methods.clear();
    for (const auto& m : o.methods)
        cfg.methods.push_back(method_from_string(m));
    cfg.optimizer = optimizer_from_string(o.optimizer);
    cfg.sampling = sampling_from_string(o.sampling);
    cfg.test_n = o.test_n;
    cfg.search.alpha = o.alpha;
    cfg.search.max_iters = o.max_iters;
    cfg.search.rel_tol = o.rel_tol;

    std::vector<ResultRow> all;
    for (const std::size_t n : o.n) {
        cfg.n = n;
        auto rows = run_benchmark(cfg);
        all.insert(all.end(), rows.begin(), rows.end());
    }
    print_rows(all);
    write_results_csv(all, o.out);
    std::cout << "results written to " << o.out << "\n";
    if (!o.summary.empty()) {
        write_text(results_summary_json(cfg, all) + "\n", o.summary);
        std::cout << "summary written to " << o.summary << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------- sweep-theta

struct SweepOpts {
    std::string preset;
    std::string function = "franke2d";
    std::string data;
    std::size_t dim = 0;
    unsigned terms = 3;
    std::size_t n = 2000;
    std::uint64_t seed = 0;
    double noise = 0.0;
    std::vector<int> levels{0, 1, 2};
    double theta_min = 1e-4;
    double theta_max = 0.0;
    std::size_t points = 25;
    std::string sampling = "uniform";
    std::string out = "sweep.csv";
};

int cmd_sweep(SweepOpts o, const CLI::App& sub) {
    if (!o.preset.empty()) {
        const auto it = presets().find(o.preset);
        if (it == presets().end())
            throw UsageError("unknown preset '" + o.preset + "'");
        const Preset& p = it->second;
        auto unset = [&](const char* name) { return sub.count(name) == 0; };
        if (unset("--function"))
            o.function = p.function;
        if (unset("--dim"))
            o.dim = p.dim;
        if (unset("--n"))
            o.n = p.n.front();
        if (unset("--noise"))
            o.noise = p.noise;
        if (unset("--levels"))
            o.levels = p.levels;
    }
    SweepConfig cfg;
    cfg.function = o.function;
    cfg.dim = o.dim;
    cfg.terms = o.terms;
    if (!o.data.empty())
        cfg.csv = o.data;
    cfg.n = o.n;
    cfg.seed = o.seed;
    cfg.noise_s = o.noise;
    cfg.levels = levels_from(o.levels);
    cfg.theta_min = o.theta_min;
    if (sub.count("--theta-max"))
        cfg.theta_max = o.theta_max;
    cfg.points = o.points;
    cfg.sampling = sampling_from_string(o.sampling);

    const auto rows = run_sweep(cfg);
    write_sweep_csv(rows, o.out);
    double best = INFINITY;
    for (const auto& r : rows)
        best = std::min(best, r.validation_rmse);
    std::cout << rows.size() << " rows written to " << o.out << ", lowest validation rmse " << g17(best) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kinreg: kinetic-based regularization for scattered data interpolation"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "sample a benchmark function to CSV");
    g->add_option("--function", gen.function, "franke2d, camel, ackley6d, weierstrass, rastrigin")
        ->capture_default_str();
    g->add_option("--dim", gen.dim, "dimension for camel and rastrigin");
    g->add_option("--terms", gen.terms, "Weierstrass partial-sum length")->capture_default_str();
    g->add_option("--n", gen.n, "number of rows")->capture_default_str();
    g->add_option("--seed", gen.seed, "random seed")->capture_default_str();
    g->add_option("--sampling", gen.sampling, "uniform or grid")->capture_default_str();
    g->add_option("--noise", gen.noise, "multiplicative noise scale s")->capture_default_str();
    g->add_option("--out", gen.out, "output CSV")->capture_default_str();
    g->add_option("--test-out", gen.test_out, "also write a noiseless uniform test set here");
    g->add_option("--test-n", gen.test_n, "test set size")->capture_default_str();

    FitOpts fo;
    auto* f = app.add_subcommand("fit", "search theta and fit a model on a CSV");
    f->add_option("--data", fo.data, "training CSV (x0..x{D-1},phi)")->required();
    f->add_option("--model", fo.model, "output model file")->capture_default_str();
    f->add_option("--level", fo.level, "correction level 0, 1 or 2")->capture_default_str();
    f->add_option("--method", fo.method, "kinetic or rbf")->capture_default_str();
    f->add_option("--optimizer", fo.optimizer, "maxent or mle")->capture_default_str();
    auto* theta_opt = f->add_option("--theta", fo.theta, "fixed temperature (normalized units)");
    f->add_flag("--no-search", fo.no_search, "skip the search and fit all rows at --theta");
    f->add_option("--split-ratio", fo.split_ratio, "training fraction for the search")->capture_default_str();
    f->add_option("--seed", fo.seed, "split seed")->capture_default_str();
    f->add_option("--alpha", fo.alpha, "relaxation of the temperature update")->capture_default_str();
    f->add_option("--max-iters", fo.max_iters, "maximum temperature candidates")->capture_default_str();
    f->add_option("--rel-tol", fo.rel_tol, "convergence tolerance of the search")->capture_default_str();
    f->add_option("--knn-k", fo.knn_k, "neighbours for the typical spacing")->capture_default_str();

    PredictOpts po;
    auto* p = app.add_subcommand("predict", "predict with a saved model");
    p->add_option("--model", po.model, "model file")->required();
    p->add_option("--queries", po.queries, "query CSV (x0..x{D-1}[,phi])")->required();
    p->add_option("--out", po.out, "output CSV")->capture_default_str();

    BenchOpts bo;
    auto* b = app.add_subcommand("benchmark", "run seeded experiments and write a result table");
    b->add_option("--preset", bo.preset, preset_help());
    b->add_option("--function", bo.function, "benchmark function")->capture_default_str();
    b->add_option("--data", bo.data, "use a CSV instead of a function (20% held out for testing)");
    b->add_option("--dim", bo.dim, "dimension for camel and rastrigin");
    b->add_option("--terms", bo.terms, "Weierstrass partial-sum length")->capture_default_str();
    b->add_option("--n", bo.n, "training sizes (before the 80:20 split)")->delimiter(',')->capture_default_str();
    b->add_option("--seeds", bo.seeds, "number of seeds")->capture_default_str();
    b->add_option("--first-seed", bo.first_seed, "first seed")->capture_default_str();
    b->add_option("--noise", bo.noise, "multiplicative noise scale s")->capture_default_str();
    b->add_option("--levels", bo.levels, "correction levels")->delimiter(',')->capture_default_str();
    b->add_option("--methods", bo.methods, "kinetic and/or rbf")->delimiter(',')->capture_default_str();
    b->add_option("--optimizer", bo.optimizer, "maxent or mle")->capture_default_str();
    b->add_option("--sampling", bo.sampling, "uniform or grid")->capture_default_str();
    b->add_option("--test-n", bo.test_n, "test points per seed")->capture_default_str();
    b->add_option("--alpha", bo.alpha, "relaxation of the temperature update")->capture_default_str();
    b->add_option("--max-iters", bo.max_iters, "maximum temperature candidates")->capture_default_str();
    b->add_option("--rel-tol", bo.rel_tol, "convergence tolerance of the search")->capture_default_str();
    b->add_option("--out", bo.out, "result CSV")->capture_default_str();
    b->add_option("--summary", bo.summary, "optional JSON summary with per-group mean/std");

    SweepOpts so;
    auto* s = app.add_subcommand("sweep-theta", "validation RMSE on a log-spaced theta grid");
    s->add_option("--preset", so.preset, preset_help());
    s->add_option("--function", so.function, "benchmark function")->capture_default_str();
    s->add_option("--data", so.data, "use a CSV instead of a function");
    s->add_option("--dim", so.dim, "dimension for camel and rastrigin");
    s->add_option("--terms", so.terms, "Weierstrass partial-sum length")->capture_default_str();
    s->add_option("--n", so.n, "number of rows")->capture_default_str();
    s->add_option("--seed", so.seed, "random seed")->capture_default_str();
    s->add_option("--noise", so.noise, "multiplicative noise scale s")->capture_default_str();
    s->add_option("--levels", so.levels, "correction levels")->delimiter(',')->capture_default_str();
    s->add_option("--theta-min", so.theta_min, "lower end of the grid")->capture_default_str();
    s->add_option("--theta-max", so.theta_max, "upper end of the grid (default: variance guess)");
    s->add_option("--points", so.points, "grid points")->capture_default_str();
    s->add_option("--sampling", so.sampling, "uniform or grid")->capture_default_str();
    s->add_option("--out", so.out, "output CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        set_thread_count(threads);
        if (*g)
            return cmd_generate(gen);
        if (*f)
            return cmd_fit(fo, theta_opt->count() > 0);
        if (*p)
            return cmd_predict(po);
        if (*b)
            return cmd_benchmark(bo, *b);
        if (*s)
            return cmd_sweep(so, *s);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}

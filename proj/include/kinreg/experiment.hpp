#ifndef KINREG_EXPERIMENT_HPP
#define KINREG_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kinreg/benchfn.hpp"
#include "kinreg/interpolator.hpp"
#include "kinreg/temperature.hpp"

namespace kinreg {

inline constexpr int kResultSchemaVersion = 1;

enum class Method { Kinetic, Rbf };
enum class Optimizer { MaxEnt, Mle };

std::string to_string(Method m);
std::string to_string(Optimizer o);
Method method_from_string(const std::string& s);
Optimizer optimizer_from_string(const std::string& s);

/// One benchmark run: either a closed-form function sampled on [0,1]^D or a
/// user CSV. For a CSV, a seeded 20% of the rows is held out as the test set
/// and the metrics compare against the (possibly noisy) stored values.
struct BenchmarkConfig {
    std::string function = "franke2d";
    std::size_t dim = 0;  ///< 0 keeps the function's default dimension
    unsigned terms = 3;   ///< Weierstrass partial-sum length
    std::optional<std::filesystem::path> csv;

    std::size_t n = 2000;
    SamplingMode sampling = SamplingMode::UniformRandom;
    std::vector<std::uint64_t> seeds{0};
    double noise_s = 0.0;
    std::vector<CorrectionLevel> levels{CorrectionLevel::None, CorrectionLevel::FirstMoment,
                                        CorrectionLevel::SecondMoment};
    std::vector<Method> methods{Method::Kinetic};
    Optimizer optimizer = Optimizer::MaxEnt;
    ThetaSearchConfig search;
    CgConfig cg;
    std::size_t test_n = 10000;
    double split_ratio = 0.8;
};

struct ResultRow {
    std::string function;
    Method method = Method::Kinetic;
    std::optional<CorrectionLevel> level; ///< empty for RBF rows
    std::size_t dim = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double s = 0.0;
    double theta_opt = 0.0;
    double theta_over_dtyp2 = 0.0;
    double validation_rmse = 0.0;
    double rmse = 0.0;
    double l1_mean = 0.0;
    double linf = 0.0;
    std::optional<double> r2;
    double fit_seconds = 0.0;
    double search_seconds = 0.0;
    double predict_seconds = 0.0;
    std::size_t n_failed_corrections = 0;
    std::optional<double> ratio; ///< level-0 RMSE of the same seed divided by this row's RMSE
    std::string error;           ///< non-empty when the row failed; metrics are then NaN
};

/// Sample, (noise), split, search theta, fit on the training part and score
/// on a fresh test set, for every seed x method x level. Rows are sorted by
/// (method, level, seed). Failures are recorded per row.
std::vector<ResultRow> run_benchmark(const BenchmarkConfig& cfg);

/// Test points drawn for a seed; exposed so callers can check they never
/// coincide with training data.
RawDataset benchmark_test_set(const BenchmarkFunction& fn, std::size_t test_n, std::uint64_t seed);
RawDataset benchmark_training_data(const BenchmarkFunction& fn, const BenchmarkConfig& cfg, std::uint64_t seed);

void write_results_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);
std::string results_summary_json(const BenchmarkConfig& cfg, const std::vector<ResultRow>& rows);

struct SweepConfig {
    std::string function = "franke2d";
    std::size_t dim = 0;
    unsigned terms = 3;
    std::optional<std::filesystem::path> csv;
    std::size_t n = 2000;
    SamplingMode sampling = SamplingMode::UniformRandom;
    std::uint64_t seed = 0;
    double noise_s = 0.0;
    std::vector<CorrectionLevel> levels{CorrectionLevel::None, CorrectionLevel::FirstMoment,
                                        CorrectionLevel::SecondMoment};
    double theta_min = 1e-4;
    std::optional<double> theta_max; ///< defaults to the variance guess
    std::size_t points = 25;
    double split_ratio = 0.8;
    SolverConfig solver;
};

struct SweepRow {
    double theta = 0.0;
    double theta_over_dtyp2 = 0.0;
    CorrectionLevel level = CorrectionLevel::None;
    double validation_rmse = 0.0;
    std::size_t n_failed_corrections = 0;
};

/// Validation RMSE on a log-spaced theta grid, one row per (theta, level).
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Log-spaced grid from lo to hi inclusive; a single point yields {lo}.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

} // namespace kinreg

#endif // KINREG_EXPERIMENT_HPP

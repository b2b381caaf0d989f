#pragma once

// Batch experiments: repeated seeded runs of one (function, dimension,
// algorithm) cell, cross-run statistics, convergence traces, and the files
// that carry them (structured run records, delimiter-separated tables, SVG
// plots with their raw series).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpa/engine.hpp"
#include "json.hpp"

namespace fpa::harness {

inline constexpr const char* kLibraryVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Generations used for a dimension: 1000 up to d = 10, 1500 up to d = 30,
/// 2500 beyond.
std::size_t default_generations(std::size_t dimension) noexcept;

struct ExperimentConfig {
    std::string function = "sphere";
    std::size_t dimension = 10;
    Algorithm algorithm = Algorithm::proposed;
    std::size_t runs = 100;
    std::size_t swarm_size = 50;
    std::size_t max_generations = 1000;
    double switch_probability = kOriginalSwitchProbability;  ///< original only
    SwitchProbabilitySchedule schedule = SwitchProbabilitySchedule::standard();  ///< proposed only
    double levy_exponent = levy::kDefaultExponent;
    double global_step_scale = kDefaultGlobalStepScale;
    std::uint64_t master_seed = 0;
    GlobalStepDirection direction = GlobalStepDirection::toward_best;
    LocalScaling local_scaling = LocalScaling::scalar;
    bool literal_himmelblau = false;
    std::filesystem::path output_dir = "results";
    std::size_t workers = 1;  ///< execution detail, not part of the config echo

    /// Table defaults for a cell: 50 pollen, 100 runs, generations by dimension.
    static ExperimentConfig defaults_for(std::string function, std::size_t dimension,
                                         Algorithm algorithm);

    /// Throws ConfigError, LookupError or DimensionError.
    void validate() const;

    bench::BenchmarkFunction objective() const;

    /// Switch probability the engine actually uses.
    double effective_switch_probability() const;

    /// Engine config for run `run_index`; the seed is derive_seed(master_seed, run_index).
    FpaConfig run_config(std::size_t run_index) const;

    /// `<function>_<dimension>_<algorithm>`
    std::string cell_name() const;
};

/// Config echo: every parameter that influences results, plus the schema version.
nlohmann::json to_json(const ExperimentConfig& cfg);
/// Reads a config echo or a config file. Missing keys keep the values in `base`.
ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base = {});

struct RunStatistics {
    double best = 0.0;
    double worst = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double sd = 0.0;  ///< population standard deviation (divisor N)
    std::size_t runs = 0;

    friend bool operator==(const RunStatistics&, const RunStatistics&) = default;
};

/// Throws AggregationError on an empty or non-finite sample.
RunStatistics compute_statistics(std::span<const double> values);

/// Per-generation mean of best-so-far across runs with a min/max envelope.
struct ConvergenceTrace {
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;

    std::size_t generations() const noexcept { return mean.size(); }
    friend bool operator==(const ConvergenceTrace&, const ConvergenceTrace&) = default;
};

ConvergenceTrace aggregate_traces(std::span<const RunResult> runs);

struct ExperimentResult {
    ExperimentConfig config;
    RunStatistics statistics;
    ConvergenceTrace trace;
    std::vector<RunResult> runs;  ///< in run-index order
};

/// Executes cfg.runs seeded runs on up to cfg.workers threads. The returned
/// vector is in run-index order regardless of completion order.
std::vector<RunResult> execute_runs(const ExperimentConfig& cfg);

/// Runs and aggregates without touching the file system.
ExperimentResult run_experiment_in_memory(const ExperimentConfig& cfg);

/// Runs, aggregates and persists into cfg.output_dir / cfg.cell_name().
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes runs.json, stats.csv, trace.csv and plot.svg for one cell and
/// returns the cell directory. Throws IoError with the path on failure.
std::filesystem::path persist(const ExperimentResult& result);

nlohmann::json run_record(const RunResult& run, std::size_t run_index);
/// Structured record: config echo, library version, statistics and every run.
nlohmann::json experiment_record(const ExperimentResult& result);

/// Re-aggregates the `final_best` of every run in an experiment record.
RunStatistics statistics_from_record(const nlohmann::json& record);

/// Two-sided Wilcoxon rank-sum test, normal approximation with tie correction.
struct RankSumResult {
    double u_statistic = 0.0;
    double z = 0.0;
    double p_value = 1.0;
};
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

enum class Verdict { first_better, second_better, tie };
std::string_view to_string(Verdict v) noexcept;

struct ComparisonRecord {
    ExperimentResult first;
    ExperimentResult second;
    Verdict better_mean = Verdict::tie;  ///< lower mean wins
    double mean_ratio = 1.0;             ///< second.mean / first.mean
    RankSumResult rank_sum;              ///< artifact extension
};

/// Pairs two finished experiments. Throws ComparisonError unless both share
/// function, dimension, swarm size, generations and run count.
ComparisonRecord compare_results(ExperimentResult first, ExperimentResult second);

/// Runs both configs (persisting each) and compares them.
ComparisonRecord compare_algorithms(const ExperimentConfig& first, const ExperimentConfig& second);

nlohmann::json comparison_json(std::span<const ComparisonRecord> records);

/// Scientific notation with three significant digits: 0.1536 -> "1.54E-01".
std::string format_sci(double value);

inline constexpr const char* kTableHeader =
    "Function,Name,Algorithm,Dimension,Best,Worst,Mean,Median,SD";

std::string table_row(const ExperimentResult& result);

/// Header plus two rows per record. Throws ComparisonError when `records` is
/// empty and IoError on write failure.
void emit_table(std::span<const ComparisonRecord> records, const std::filesystem::path& path);

struct TraceSeries {
    std::string label;
    ConvergenceTrace trace;
};

struct PlotPanel {
    std::string title;
    std::vector<TraceSeries> series;  ///< all of equal length
};

/// Legend label for an algorithm's curve: "FPA" or "Proposed FPA".
std::string series_label(Algorithm a);

/// Renders one panel per entry side by side. The y axis is logarithmic when
/// every plotted value is positive and linear otherwise. The raw series go to
/// `data_path` as CSV. Throws PlotError on empty input or mismatched lengths.
void emit_convergence_plot(std::span<const PlotPanel> panels, const std::filesystem::path& svg_path,
                           const std::filesystem::path& data_path);

/// True when the panel would be drawn with a log y axis.
bool uses_log_scale(const PlotPanel& panel);

/// Full comparison grid: every function x dimension, original vs proposed.
struct ReplicationPlan {
    ExperimentConfig base;  ///< runs, seed, scales, flags, output_dir, workers
    std::vector<std::string> functions = bench::names();
    std::vector<std::size_t> dimensions{10, 30, 50};
    std::optional<std::size_t> generations;  ///< default: by dimension
};

/// Persists every cell, then writes table.csv, comparison.json and one
/// `<function>_convergence.svg` (with its `.csv`) per function into
/// plan.base.output_dir. Records are in function-major, dimension-minor order.
std::vector<ComparisonRecord> replicate(const ReplicationPlan& plan);

}  // namespace fpa::harness

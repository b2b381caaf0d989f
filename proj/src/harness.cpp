#include "fpa/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace fpa::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t default_generations(std::size_t dimension) noexcept {
    if (dimension <= 10) return 1000;
    if (dimension <= 30) return 1500;
    return 2500;
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig ExperimentConfig::defaults_for(std::string function, std::size_t dimension,
                                                Algorithm algorithm) {
    ExperimentConfig cfg;
    cfg.function = std::move(function);
    cfg.dimension = dimension;
    cfg.algorithm = algorithm;
    cfg.max_generations = default_generations(dimension);
    return cfg;
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    objective();
    run_config(0).validate();
}

bench::BenchmarkFunction ExperimentConfig::objective() const {
    return bench::registry_lookup(function, dimension,
                                  literal_himmelblau ? bench::HimmelblauForm::literal
                                                     : bench::HimmelblauForm::standard);
}

double ExperimentConfig::effective_switch_probability() const {
    return algorithm == Algorithm::proposed ? switch_probability_for(dimension, schedule)
                                            : switch_probability;
}

FpaConfig ExperimentConfig::run_config(std::size_t run_index) const {
    FpaConfig c;
    c.swarm_size = swarm_size;
    c.max_generations = max_generations;
    c.switch_probability = effective_switch_probability();
    c.levy_exponent = levy_exponent;
    c.global_step_scale = global_step_scale;
    c.seed = derive_seed(master_seed, run_index);
    c.direction = direction;
    c.local_scaling = local_scaling;
    return c;
}

std::string ExperimentConfig::cell_name() const {
    return function + "_" + std::to_string(dimension) + "_" + std::string(to_string(algorithm));
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["function"] = cfg.function;
    j["dimension"] = cfg.dimension;
    j["algorithm"] = std::string(to_string(cfg.algorithm));
    j["runs"] = cfg.runs;
    j["swarm_size"] = cfg.swarm_size;
    j["max_generations"] = cfg.max_generations;
    if (cfg.algorithm == Algorithm::original) {
        j["switch_probability"] = cfg.switch_probability;
    } else {
        j["schedule"] = cfg.schedule.to_string();
    }
    j["effective_switch_probability"] = cfg.effective_switch_probability();
    j["levy_exponent"] = cfg.levy_exponent;
    j["global_step_scale"] = cfg.global_step_scale;
    j["master_seed"] = cfg.master_seed;
    j["global_step_direction"] = std::string(to_string(cfg.direction));
    j["local_scaling"] = std::string(to_string(cfg.local_scaling));
    j["himmelblau_form"] = cfg.literal_himmelblau ? "literal" : "standard";
    return j;
}

ExperimentConfig from_json(const json& j, ExperimentConfig base) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
        throw ConfigError("config: unsupported schema_version " + j.at("schema_version").dump() +
                          " (expected " + std::to_string(kSchemaVersion) + ")");
    }
    static const std::vector<std::string> known{
        "schema_version", "function",       "dimension",         "algorithm",
        "runs",           "swarm_size",     "max_generations",   "switch_probability",
        "schedule",       "levy_exponent",  "global_step_scale", "master_seed",
        "global_step_direction", "local_scaling", "himmelblau_form", "output_dir",
        "workers",        "effective_switch_probability"};
    for (const auto& [key, _] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    try {
        if (j.contains("function")) base.function = j["function"].get<std::string>();
        if (j.contains("dimension")) {
            base.dimension = j["dimension"].get<std::size_t>();
            if (!j.contains("max_generations")) {
                base.max_generations = default_generations(base.dimension);
            }
        }
        if (j.contains("algorithm")) base.algorithm = parse_algorithm(j["algorithm"].get<std::string>());
        if (j.contains("runs")) base.runs = j["runs"].get<std::size_t>();
        if (j.contains("swarm_size")) base.swarm_size = j["swarm_size"].get<std::size_t>();
        if (j.contains("max_generations")) base.max_generations = j["max_generations"].get<std::size_t>();
        if (j.contains("switch_probability")) base.switch_probability = j["switch_probability"].get<double>();
        if (j.contains("schedule")) {
            base.schedule = SwitchProbabilitySchedule::parse(j["schedule"].get<std::string>());
        }
        if (j.contains("levy_exponent")) base.levy_exponent = j["levy_exponent"].get<double>();
        if (j.contains("global_step_scale")) base.global_step_scale = j["global_step_scale"].get<double>();
        if (j.contains("master_seed")) base.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("global_step_direction")) {
            const auto d = j["global_step_direction"].get<std::string>();
            if (d == "toward_best") {
                base.direction = GlobalStepDirection::toward_best;
            } else if (d == "away_from_best") {
                base.direction = GlobalStepDirection::away_from_best;
            } else {
                throw ConfigError("config: global_step_direction must be toward_best or away_from_best");
            }
        }
        if (j.contains("local_scaling")) {
            const auto s = j["local_scaling"].get<std::string>();
            if (s == "scalar") {
                base.local_scaling = LocalScaling::scalar;
            } else if (s == "per_coordinate") {
                base.local_scaling = LocalScaling::per_coordinate;
            } else {
                throw ConfigError("config: local_scaling must be scalar or per_coordinate");
            }
        }
        if (j.contains("himmelblau_form")) {
            const auto f = j["himmelblau_form"].get<std::string>();
            if (f != "standard" && f != "literal") {
                throw ConfigError("config: himmelblau_form must be standard or literal");
            }
            base.literal_himmelblau = f == "literal";
        }
        if (j.contains("output_dir")) base.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("workers")) base.workers = j["workers"].get<std::size_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return base;
}

// ---------------------------------------------------------------------------
// Statistics

RunStatistics compute_statistics(std::span<const double> values) {
    if (values.empty()) throw AggregationError("compute_statistics: empty sample");
    for (double v : values) {
        if (!std::isfinite(v)) throw AggregationError("compute_statistics: non-finite value");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    RunStatistics s;
    s.runs = n;
    s.best = sorted.front();
    s.worst = sorted.back();
    s.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    if (s.best == s.worst) {
        s.mean = s.best;
        s.sd = 0.0;
        return s;
    }
    // summed in sorted order so the result does not depend on run order
    double sum = 0.0;
    for (double v : sorted) sum += v;
    s.mean = std::clamp(sum / static_cast<double>(n), s.best, s.worst);
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(n));
    return s;
}

ConvergenceTrace aggregate_traces(std::span<const RunResult> runs) {
    if (runs.empty()) throw AggregationError("aggregate_traces: no runs");
    const std::size_t g = runs.front().fitness_trace.size();
    ConvergenceTrace t;
    t.mean.assign(g, 0.0);
    t.min = runs.front().fitness_trace;
    t.max = runs.front().fitness_trace;
    for (const auto& r : runs) {
        if (r.fitness_trace.size() != g) throw AggregationError("aggregate_traces: trace lengths differ");
        for (std::size_t i = 0; i < g; ++i) {
            const double v = r.fitness_trace[i];
            t.mean[i] += v;
            t.min[i] = std::min(t.min[i], v);
            t.max[i] = std::max(t.max[i], v);
        }
    }
    for (double& m : t.mean) m /= static_cast<double>(runs.size());
    return t;
}

// ---------------------------------------------------------------------------
// Execution

std::vector<RunResult> execute_runs(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto objective = cfg.objective();
    std::vector<RunResult> results(cfg.runs);

    const auto one = [&](std::size_t i) {
        const FpaConfig rc = cfg.run_config(i);
        if (cfg.algorithm == Algorithm::proposed) {
            results[i] = run_improved(rc, objective, cfg.schedule);
        } else {
            results[i] = run(rc, objective);
        }
    };

    const std::size_t workers = std::min(cfg.workers, cfg.runs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < cfg.runs; ++i) one(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < cfg.runs; i = next++) {
                try {
                    one(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

ExperimentResult run_experiment_in_memory(const ExperimentConfig& cfg) {
    ExperimentResult r;
    r.config = cfg;
    r.runs = execute_runs(cfg);
    std::vector<double> finals;
    finals.reserve(r.runs.size());
    for (const auto& run : r.runs) finals.push_back(run.best_fitness);
    r.statistics = compute_statistics(finals);
    r.trace = aggregate_traces(r.runs);
    return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult r = run_experiment_in_memory(cfg);
    persist(r);
    return r;
}

// ---------------------------------------------------------------------------
// Records

json run_record(const RunResult& run, std::size_t run_index) {
    json j;
    j["run_index"] = run_index;
    j["seed"] = run.config.seed;
    j["final_best"] = run.best_fitness;
    j["best_position"] = run.best_position;
    j["evaluations_used"] = run.evaluations_used;
    j["global_moves"] = run.global_moves;
    j["local_moves"] = run.local_moves;
    j["fitness_trace"] = run.fitness_trace;
    return j;
}

namespace {

json statistics_json(const RunStatistics& s) {
    return json{{"best", s.best},     {"worst", s.worst}, {"mean", s.mean},
                {"median", s.median}, {"sd", s.sd},       {"runs", s.runs}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir.string() + "': " +
                      (ec ? ec.message() : std::string("not a directory")));
    }
}

}  // namespace

json experiment_record(const ExperimentResult& result) {
    json j;
    j["library"] = {{"name", "fpa"}, {"version", kLibraryVersion}};
    j["config"] = to_json(result.config);
    j["statistics"] = statistics_json(result.statistics);
    j["statistics_notes"] = {{"sd_divisor", "N"},
                             {"best", "minimum final objective (minimization)"},
                             {"trace", "cross-run mean of best-so-far with min/max envelope"}};
    json runs = json::array();
    for (std::size_t i = 0; i < result.runs.size(); ++i) runs.push_back(run_record(result.runs[i], i));
    j["runs"] = std::move(runs);
    return j;
}

RunStatistics statistics_from_record(const json& record) {
    std::vector<double> finals;
    for (const auto& r : record.at("runs")) finals.push_back(r.at("final_best").get<double>());
    return compute_statistics(finals);
}

std::string format_sci(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2E", value);
    return buf;
}

std::string table_row(const ExperimentResult& r) {
    const auto objective = r.config.objective();
    const auto& s = r.statistics;
    std::ostringstream row;
    row << objective.number << ',' << objective.display_name << ','
        << display_name(r.config.algorithm) << ',' << r.config.dimension << ','
        << format_sci(s.best) << ',' << format_sci(s.worst) << ',' << format_sci(s.mean) << ','
        << format_sci(s.median) << ',' << format_sci(s.sd);
    return row.str();
}

fs::path persist(const ExperimentResult& result) {
    const fs::path dir = result.config.output_dir / result.config.cell_name();
    ensure_directory(dir);
    write_text(dir / "runs.json", experiment_record(result).dump(2) + "\n");
    write_text(dir / "stats.csv", std::string(kTableHeader) + "\n" + table_row(result) + "\n");

    PlotPanel panel;
    panel.title = result.config.objective().display_name + " d=" +
                  std::to_string(result.config.dimension);
    panel.series.push_back({series_label(result.config.algorithm), result.trace});
    const PlotPanel panels[] = {panel};
    emit_convergence_plot(panels, dir / "plot.svg", dir / "trace.csv");
    return dir;
}

// ---------------------------------------------------------------------------
// Comparison

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw AggregationError("rank_sum_test: empty sample");
    struct Item {
        double value;
        bool first;
    };
    std::vector<Item> all;
    all.reserve(a.size() + b.size());
    for (double v : a) all.push_back({v, true});
    for (double v : b) all.push_back({v, false});
    std::sort(all.begin(), all.end(), [](const Item& x, const Item& y) { return x.value < y.value; });

    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;
    double rank_sum_first = 0.0;
    double tie_term = 0.0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].first) rank_sum_first += avg_rank;
        }
        i = j;
    }
    RankSumResult r;
    r.u_statistic = rank_sum_first - n1 * (n1 + 1.0) / 2.0;
    const double mean_u = n1 * n2 / 2.0;
    const double var_u = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var_u <= 0.0) {
        r.z = 0.0;
        r.p_value = 1.0;
        return r;
    }
    r.z = (r.u_statistic - mean_u) / std::sqrt(var_u);
    r.p_value = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    return r;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::first_better: return "first";
        case Verdict::second_better: return "second";
        case Verdict::tie: return "tie";
    }
    return "tie";
}

ComparisonRecord compare_results(ExperimentResult first, ExperimentResult second) {
    const auto& a = first.config;
    const auto& b = second.config;
    const auto mismatch = [](const std::string& field) {
        return ComparisonError("compare: experiments differ in " + field);
    };
    if (a.function != b.function) throw mismatch("function");
    if (a.dimension != b.dimension) throw mismatch("dimension");
    if (a.swarm_size != b.swarm_size) throw mismatch("swarm_size");
    if (a.max_generations != b.max_generations) throw mismatch("max_generations");
    if (a.runs != b.runs) throw mismatch("runs");
    if (a.literal_himmelblau != b.literal_himmelblau) throw mismatch("himmelblau_form");

    ComparisonRecord rec;
    const double ma = first.statistics.mean;
    const double mb = second.statistics.mean;
    rec.better_mean = ma < mb ? Verdict::first_better
                              : (mb < ma ? Verdict::second_better : Verdict::tie);
    if (ma == mb) {
        rec.mean_ratio = 1.0;
    } else {
        rec.mean_ratio = ma == 0.0 ? std::copysign(HUGE_VAL, mb) : mb / ma;
    }
    std::vector<double> fa, fb;
    for (const auto& r : first.runs) fa.push_back(r.best_fitness);
    for (const auto& r : second.runs) fb.push_back(r.best_fitness);
    rec.rank_sum = rank_sum_test(fa, fb);
    rec.first = std::move(first);
    rec.second = std::move(second);
    return rec;
}

ComparisonRecord compare_algorithms(const ExperimentConfig& first, const ExperimentConfig& second) {
    first.validate();
    second.validate();
    // fail on mismatched settings before spending any run time
    if (first.function != second.function || first.dimension != second.dimension ||
        first.swarm_size != second.swarm_size || first.max_generations != second.max_generations ||
        first.runs != second.runs || first.literal_himmelblau != second.literal_himmelblau) {
        ExperimentResult a, b;
        a.config = first;
        b.config = second;
        compare_results(std::move(a), std::move(b));
    }
    return compare_results(run_experiment(first), run_experiment(second));
}

json comparison_json(std::span<const ComparisonRecord> records) {
    json out;
    out["library"] = {{"name", "fpa"}, {"version", kLibraryVersion}};
    out["significance_note"] =
        "rank_sum is an artifact extension (two-sided Wilcoxon rank-sum, normal approximation); "
        "the verdict uses means only";
    json cells = json::array();
    for (const auto& r : records) {
        json c;
        c["function"] = r.first.config.function;
        c["dimension"] = r.first.config.dimension;
        c["first"] = {{"cell", r.first.config.cell_name()},
                      {"algorithm", std::string(to_string(r.first.config.algorithm))},
                      {"statistics", statistics_json(r.first.statistics)}};
        c["second"] = {{"cell", r.second.config.cell_name()},
                       {"algorithm", std::string(to_string(r.second.config.algorithm))},
                       {"statistics", statistics_json(r.second.statistics)}};
        c["better_mean"] = std::string(to_string(r.better_mean));
        c["mean_ratio"] = std::isfinite(r.mean_ratio) ? json(r.mean_ratio) : json(nullptr);
        c["rank_sum_artifact_extension"] = {{"u", r.rank_sum.u_statistic},
                                            {"z", r.rank_sum.z},
                                            {"p_value", r.rank_sum.p_value}};
        cells.push_back(std::move(c));
    }
    out["comparisons"] = std::move(cells);
    return out;
}

void emit_table(std::span<const ComparisonRecord> records, const fs::path& path) {
    if (records.empty()) throw ComparisonError("emit_table: no comparison records");
    std::string text = std::string(kTableHeader) + "\n";
    for (const auto& r : records) {
        text += table_row(r.first) + "\n";
        text += table_row(r.second) + "\n";
    }
    if (path.has_parent_path()) ensure_directory(path.parent_path());
    write_text(path, text);
}

// ---------------------------------------------------------------------------
// Plotting

std::string series_label(Algorithm a) { return std::string(display_name(a)); }

bool uses_log_scale(const PlotPanel& panel) {
    for (const auto& s : panel.series) {
        for (const auto* v : {&s.trace.mean, &s.trace.min, &s.trace.max}) {
            for (double x : *v) {
                if (!(x > 0.0)) return false;
            }
        }
    }
    return true;
}

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 320.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 15.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 45.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void render_panel(std::ostringstream& svg, const PlotPanel& panel, double x0) {
    const bool log_y = uses_log_scale(panel);
    const auto tf = [log_y](double v) { return log_y ? std::log10(v) : v; };
    const std::size_t gens = panel.series.front().trace.generations();

    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (const auto& s : panel.series) {
        for (std::size_t i = 0; i < gens; ++i) {
            lo = std::min(lo, tf(s.trace.min[i]));
            hi = std::max(hi, tf(s.trace.max[i]));
        }
    }
    if (!(hi > lo)) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double plot_w = kPanelWidth - kMarginLeft - kMarginRight;
    const double plot_h = kPanelHeight - kMarginTop - kMarginBottom;
    const double left = x0 + kMarginLeft;
    const double top = kMarginTop;
    const auto px = [&](std::size_t g) {
        return left + (gens > 1 ? plot_w * static_cast<double>(g) / static_cast<double>(gens - 1) : 0.0);
    };
    const auto py = [&](double v) { return top + plot_h * (hi - tf(v)) / (hi - lo); };

    svg << "<g>\n<text x=\"" << num(x0 + kPanelWidth / 2) << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-size=\"13\">" << escape_xml(panel.title) << "</text>\n";
    svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w)
        << "\" height=\"" << num(plot_h) << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double t = lo + (hi - lo) * k / 4.0;
        const double y = top + plot_h * (hi - t) / (hi - lo);
        svg << "<text x=\"" << num(left - 4) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-size=\"10\">"
            << format_sci(log_y ? std::pow(10.0, t) : t) << "</text>\n";
        const std::size_t g = gens > 1 ? static_cast<std::size_t>(std::lround(k / 4.0 * (gens - 1))) : 0;
        svg << "<text x=\"" << num(px(g)) << "\" y=\"" << num(top + plot_h + 14)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << g + 1 << "</text>\n";
    }
    svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(kPanelHeight - 8)
        << "\" text-anchor=\"middle\" font-size=\"11\">generation</text>\n";
    svg << "<text x=\"" << num(x0 + 14) << "\" y=\"" << num(top + plot_h / 2)
        << "\" text-anchor=\"middle\" font-size=\"11\" transform=\"rotate(-90 " << num(x0 + 14) << ' '
        << num(top + plot_h / 2) << ")\">best-so-far" << (log_y ? " (log)" : "") << "</text>\n";

    for (std::size_t s = 0; s < panel.series.size(); ++s) {
        const auto& tr = panel.series[s].trace;
        const char* color = kColors[s % std::size(kColors)];
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (std::size_t g = 0; g < gens; ++g) svg << num(px(g)) << ',' << num(py(tr.max[g])) << ' ';
        for (std::size_t g = gens; g-- > 0;) svg << num(px(g)) << ',' << num(py(tr.min[g])) << ' ';
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t g = 0; g < gens; ++g) svg << num(px(g)) << ',' << num(py(tr.mean[g])) << ' ';
        svg << "\"/>\n";
        const double ly = top + 14 + 16 * static_cast<double>(s);
        svg << "<line x1=\"" << num(left + plot_w - 110) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << num(left + plot_w - 90) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n<text class=\"legend\" x=\"" << num(left + plot_w - 86)
            << "\" y=\"" << num(ly) << "\" font-size=\"11\">" << escape_xml(panel.series[s].label)
            << "</text>\n";
    }
    svg << "</g>\n";
}

}  // namespace

void emit_convergence_plot(std::span<const PlotPanel> panels, const fs::path& svg_path,
                           const fs::path& data_path) {
    if (panels.empty()) throw PlotError("emit_convergence_plot: no panels");
    for (const auto& p : panels) {
        if (p.series.empty()) throw PlotError("emit_convergence_plot: panel '" + p.title + "' has no traces");
        const std::size_t g = p.series.front().trace.generations();
        if (g == 0) throw PlotError("emit_convergence_plot: panel '" + p.title + "' has an empty trace");
        for (const auto& s : p.series) {
            const auto& t = s.trace;
            if (t.mean.size() != g || t.min.size() != g || t.max.size() != g) {
                throw PlotError("emit_convergence_plot: trace lengths differ in panel '" + p.title + "'");
            }
        }
    }

    std::ostringstream data;
    data.precision(17);
    data << "panel,series,generation,mean,min,max\n";
    for (const auto& p : panels) {
        for (const auto& s : p.series) {
            for (std::size_t g = 0; g < s.trace.generations(); ++g) {
                data << p.title << ',' << s.label << ',' << g + 1 << ',' << s.trace.mean[g] << ','
                     << s.trace.min[g] << ',' << s.trace.max[g] << '\n';
            }
        }
    }

    std::ostringstream svg;
    const double width = kPanelWidth * static_cast<double>(panels.size());
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(kPanelHeight) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(kPanelHeight)
        << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) {
        render_panel(svg, panels[i], kPanelWidth * static_cast<double>(i));
    }
    svg << "</svg>\n";

    for (const auto& path : {svg_path, data_path}) {
        if (path.has_parent_path()) ensure_directory(path.parent_path());
    }
    write_text(data_path, data.str());
    write_text(svg_path, svg.str());
}

// ---------------------------------------------------------------------------
// Replication grid

std::vector<ComparisonRecord> replicate(const ReplicationPlan& plan) {
    if (plan.functions.empty() || plan.dimensions.empty()) {
        throw ConfigError("replicate: empty function or dimension list");
    }
    std::vector<ComparisonRecord> records;
    for (const auto& fn : plan.functions) {
        std::vector<PlotPanel> panels;
        for (const std::size_t d : plan.dimensions) {
            ExperimentConfig original = plan.base;
            original.function = fn;
            original.dimension = d;
            original.max_generations = plan.generations.value_or(default_generations(d));
            ExperimentConfig proposed = original;
            original.algorithm = Algorithm::original;
            proposed.algorithm = Algorithm::proposed;
            records.push_back(compare_algorithms(original, proposed));

            const auto& rec = records.back();
            PlotPanel panel;
            panel.title = rec.first.config.objective().display_name + " d=" + std::to_string(d);
            panel.series.push_back({series_label(Algorithm::original), rec.first.trace});
            panel.series.push_back({series_label(Algorithm::proposed), rec.second.trace});
            panels.push_back(std::move(panel));
        }
        const fs::path stem = plan.base.output_dir / (fn + "_convergence");
        emit_convergence_plot(panels, fs::path(stem).concat(".svg"), fs::path(stem).concat(".csv"));
    }
    emit_table(records, plan.base.output_dir / "table.csv");
    write_text(plan.base.output_dir / "comparison.json", comparison_json(records).dump(2) + "\n");
    return records;
}

}  // namespace fpa::harness

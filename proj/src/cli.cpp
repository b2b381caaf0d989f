#include "fpa/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fpa/harness.hpp"

namespace fpa::cli {

namespace {

using harness::ExperimentConfig;

/// Flags shared by every experiment-shaped subcommand. Unset flags leave the
/// config-file value (or the built-in default) alone.
struct Flags {
    std::optional<std::string> function;
    std::optional<std::size_t> dimension;
    std::optional<std::string> algorithm;
    std::optional<double> p;
    std::optional<std::string> schedule;
    std::optional<std::size_t> pop;
    std::optional<std::size_t> generations;
    std::optional<std::size_t> runs;
    std::optional<std::uint64_t> seed;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<std::size_t> workers;
    std::optional<std::string> out;
    std::optional<std::string> config;
    bool eq1_sign = false;
    bool literal_himmelblau = false;
    bool per_coordinate_epsilon = false;

    void attach(CLI::App& app, bool with_algorithm) {
        app.add_option("--function", function, "benchmark name (see list-functions)");
        app.add_option("--dim", dimension, "problem dimension");
        if (with_algorithm) app.add_option("--algorithm", algorithm, "original | proposed");
        app.add_option("--p", p, "switch probability of the original algorithm");
        app.add_option("--schedule", schedule, "dimension:p anchors, e.g. \"10:0.5,30:0.2,50:0.1\"");
        app.add_option("--pop", pop, "swarm size");
        app.add_option("--generations", generations, "generations per run");
        app.add_option("--runs", runs, "independent runs");
        app.add_option("--seed", seed, "master seed");
        app.add_option("--lambda", lambda, "Levy exponent in (0, 2]");
        app.add_option("--gamma", gamma, "global step scale");
        app.add_option("--workers", workers, "worker threads (default: available cores)");
        app.add_option("--out", out, "output directory");
        app.add_option("--config", config, "JSON config file");
        app.add_flag("--eq1-sign", eq1_sign, "global step away from the best instead of toward it");
        app.add_flag("--literal-himmelblau", literal_himmelblau,
                     "use the himmelblau form with the index factor on the quartic term");
        app.add_flag("--per-coordinate-epsilon", per_coordinate_epsilon,
                     "draw an independent local scale per coordinate");
    }

    /// defaults <- config file <- flags
    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        cfg.workers = std::max(1u, std::thread::hardware_concurrency());
        bool generations_set = false;
        if (config) {
            std::ifstream in(*config);
            if (!in) throw IoError("cannot read config file '" + *config + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ConfigError("config file '" + *config + "': " + e.what());
            }
            cfg = harness::from_json(j, cfg);
            generations_set = j.contains("max_generations");
        }
        if (function) cfg.function = *function;
        if (dimension) {
            cfg.dimension = *dimension;
            if (!generations_set) cfg.max_generations = harness::default_generations(*dimension);
        }
        if (algorithm) cfg.algorithm = parse_algorithm(*algorithm);
        if (p) cfg.switch_probability = *p;
        if (schedule) cfg.schedule = SwitchProbabilitySchedule::parse(*schedule);
        if (pop) cfg.swarm_size = *pop;
        if (generations) cfg.max_generations = *generations;
        if (runs) cfg.runs = *runs;
        if (seed) cfg.master_seed = *seed;
        if (lambda) cfg.levy_exponent = *lambda;
        if (gamma) cfg.global_step_scale = *gamma;
        if (workers) cfg.workers = *workers;
        if (out) cfg.output_dir = *out;
        if (eq1_sign) cfg.direction = GlobalStepDirection::away_from_best;
        if (literal_himmelblau) cfg.literal_himmelblau = true;
        if (per_coordinate_epsilon) cfg.local_scaling = LocalScaling::per_coordinate;
        return cfg;
    }
};

std::string vector_text(const std::vector<double>& v) {
    std::ostringstream s;
    s.precision(10);
    s << '[';
    for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
    s << ']';
    return s.str();
}

void print_comparison(std::ostream& out, const harness::ComparisonRecord& rec) {
    out << harness::table_row(rec.first) << '\n' << harness::table_row(rec.second) << '\n';
}

int cmd_run(const Flags& flags, std::ostream& out) {
    ExperimentConfig cfg = flags.resolve();
    cfg.validate();
    FpaConfig rc = cfg.run_config(0);
    rc.seed = cfg.master_seed;
    const auto objective = cfg.objective();
    const RunResult r = cfg.algorithm == Algorithm::proposed
                            ? run_improved(rc, objective, cfg.schedule)
                            : run(rc, objective);
    std::ostringstream fit;
    fit.precision(17);
    fit << r.best_fitness;
    out << "function: " << r.function << '\n'
        << "dimension: " << r.dimension << '\n'
        << "algorithm: " << to_string(r.algorithm) << '\n'
        << "switch_probability: " << r.config.switch_probability << '\n'
        << "seed: " << r.config.seed << '\n'
        << "best_fitness: " << fit.str() << '\n'
        << "best_position: " << vector_text(r.best_position) << '\n'
        << "evaluations: " << r.evaluations_used << '\n';
    return 0;
}

int cmd_experiment(const Flags& flags, std::ostream& out) {
    const ExperimentConfig cfg = flags.resolve();
    const auto result = harness::run_experiment(cfg);
    out << harness::kTableHeader << '\n' << harness::table_row(result) << '\n';
    out << "written: " << (cfg.output_dir / cfg.cell_name()).string() << '\n';
    return 0;
}

int cmd_compare(const Flags& flags, std::ostream& out) {
    ExperimentConfig original = flags.resolve();
    ExperimentConfig proposed = original;
    original.algorithm = Algorithm::original;
    proposed.algorithm = Algorithm::proposed;
    const auto rec = harness::compare_algorithms(original, proposed);
    const auto stem = original.output_dir /
                      (original.function + "_" + std::to_string(original.dimension) + "_comparison");
    const harness::ComparisonRecord records[] = {rec};
    harness::emit_table(records, std::filesystem::path(stem).concat(".csv"));
    {
        std::ofstream js(std::filesystem::path(stem).concat(".json"), std::ios::binary);
        if (!js) throw IoError("cannot write '" + stem.string() + ".json'");
        js << harness::comparison_json(records).dump(2) << '\n';
    }
    out << harness::kTableHeader << '\n';
    print_comparison(out, rec);
    const char* better = rec.better_mean == harness::Verdict::tie
                             ? "tie"
                             : (rec.better_mean == harness::Verdict::first_better ? "FPA" : "Proposed FPA");
    out << "better mean: " << better << '\n'
        << "mean ratio (proposed/original): " << rec.mean_ratio << '\n'
        << "rank-sum p-value (artifact extension): " << rec.rank_sum.p_value << '\n';
    return 0;
}

int cmd_replicate(const Flags& flags, std::ostream& out) {
    harness::ReplicationPlan plan;
    plan.base = flags.resolve();
    if (flags.function) plan.functions = {*flags.function};
    if (flags.dimension) plan.dimensions = {*flags.dimension};
    plan.generations = flags.generations;
    const auto records = harness::replicate(plan);
    out << harness::kTableHeader << '\n';
    for (const auto& r : records) print_comparison(out, r);
    out << "written: " << (plan.base.output_dir / "table.csv").string() << '\n';
    return 0;
}

int cmd_list(std::ostream& out) {
    for (const auto& name : bench::names()) {
        const auto f = bench::registry_lookup(name, name == "rosenbrock" ? 2 : 1);
        out << name << "  " << bench::to_string(f.modality) << "  [" << f.bounds.lower() << ", "
            << f.bounds.upper() << "]^D\n";
    }
    return 0;
}

}  // namespace

int parse_and_dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Flower pollination optimizer and benchmark harness", "fpa"};
    app.require_subcommand(1);

    Flags run_flags, exp_flags, rep_flags, cmp_flags;
    auto* run_cmd = app.add_subcommand("run", "one seeded run; prints best fitness and position");
    run_flags.attach(*run_cmd, true);
    auto* exp_cmd = app.add_subcommand("experiment", "repeated runs of one cell, persisted");
    exp_flags.attach(*exp_cmd, true);
    auto* rep_cmd = app.add_subcommand("replicate", "6 functions x 3 dimensions x 2 algorithms");
    rep_flags.attach(*rep_cmd, false);
    auto* cmp_cmd = app.add_subcommand("compare", "original vs proposed on one cell");
    cmp_flags.attach(*cmp_cmd, false);
    auto* list_cmd = app.add_subcommand("list-functions", "print the benchmark registry");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*run_cmd) return cmd_run(run_flags, out);
        if (*exp_cmd) return cmd_experiment(exp_flags, out);
        if (*rep_cmd) return cmd_replicate(rep_flags, out);
        if (*cmp_cmd) return cmd_compare(cmp_flags, out);
        if (*list_cmd) return cmd_list(out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return parse_and_dispatch(args, std::cout, std::cerr);
}

}  // namespace fpa::cli

#include "fpa/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace fpa {

std::string_view to_string(Algorithm a) noexcept {
    return a == Algorithm::original ? "original" : "proposed";
}

std::string_view display_name(Algorithm a) noexcept {
    return a == Algorithm::original ? "FPA" : "Proposed FPA";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "original") return Algorithm::original;
    if (text == "proposed") return Algorithm::proposed;
    throw ConfigError("algorithm must be 'original' or 'proposed', got '" + std::string(text) + "'");
}

std::string_view to_string(GlobalStepDirection d) noexcept {
    return d == GlobalStepDirection::toward_best ? "toward_best" : "away_from_best";
}

std::string_view to_string(LocalScaling s) noexcept {
    return s == LocalScaling::scalar ? "scalar" : "per_coordinate";
}

// ---------------------------------------------------------------------------
// Schedule

SwitchProbabilitySchedule::SwitchProbabilitySchedule(std::vector<Anchor> anchors)
    : anchors_(std::move(anchors)) {
    if (anchors_.empty()) throw ConfigError("schedule: at least one anchor is required");
    std::sort(anchors_.begin(), anchors_.end(),
              [](const Anchor& a, const Anchor& b) { return a.dimension < b.dimension; });
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        const auto& a = anchors_[i];
        if (a.dimension < 1) throw ConfigError("schedule: anchor dimension must be >= 1");
        if (!(a.probability > 0.0 && a.probability <= 1.0)) {
            throw ConfigError("schedule: probability for dimension " + std::to_string(a.dimension) +
                              " must lie in (0, 1]");
        }
        if (i > 0) {
            if (anchors_[i - 1].dimension == a.dimension) {
                throw ConfigError("schedule: duplicate anchor for dimension " +
                                  std::to_string(a.dimension));
            }
            if (a.probability > anchors_[i - 1].probability) {
                throw ConfigError("schedule: probabilities must not increase with dimension");
            }
        }
    }
}

SwitchProbabilitySchedule SwitchProbabilitySchedule::standard() {
    return SwitchProbabilitySchedule({{10, 0.5}, {30, 0.2}, {50, 0.1}});
}

SwitchProbabilitySchedule SwitchProbabilitySchedule::parse(std::string_view text) {
    std::vector<Anchor> anchors;
    const auto bad = [&](const std::string& why) {
        return ConfigError("schedule '" + std::string(text) + "': " + why +
                           " (expected e.g. \"10:0.5,30:0.2,50:0.1\")");
    };
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        const std::string item(text.substr(pos, comma - pos));
        const std::size_t colon = item.find(':');
        if (colon == std::string::npos) throw bad("missing ':' in '" + item + "'");
        Anchor a{};
        try {
            std::size_t used = 0;
            const std::string dim = item.substr(0, colon);
            const std::string prob = item.substr(colon + 1);
            const long long d = std::stoll(dim, &used);
            if (used != dim.size() || d < 1) throw bad("bad dimension '" + dim + "'");
            a.dimension = static_cast<std::size_t>(d);
            a.probability = std::stod(prob, &used);
            if (used != prob.size()) throw bad("bad probability '" + prob + "'");
        } catch (const std::logic_error&) {
            throw bad("cannot parse '" + item + "'");
        }
        anchors.push_back(a);
        pos = comma + 1;
    }
    return SwitchProbabilitySchedule(std::move(anchors));
}

std::string SwitchProbabilitySchedule::to_string() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        if (i) out << ',';
        out << anchors_[i].dimension << ':' << anchors_[i].probability;
    }
    return out.str();
}

double SwitchProbabilitySchedule::at(std::size_t dimension) const {
    if (dimension < 1) throw ConfigError("schedule: dimension must be >= 1");
    const auto upper = std::lower_bound(
        anchors_.begin(), anchors_.end(), dimension,
        [](const Anchor& a, std::size_t d) { return a.dimension < d; });
    if (upper == anchors_.end()) return anchors_.back().probability;
    if (upper->dimension == dimension || upper == anchors_.begin()) return upper->probability;
    const auto lower = std::prev(upper);
    const std::size_t below = dimension - lower->dimension;
    const std::size_t above = upper->dimension - dimension;
    return below <= above ? lower->probability : upper->probability;
}

double switch_probability_for(std::size_t dimension, const SwitchProbabilitySchedule& schedule) {
    return schedule.at(dimension);
}

// ---------------------------------------------------------------------------
// Config

void FpaConfig::validate() const {
    if (swarm_size < 2) {
        throw ConfigError("swarm_size must be >= 2 (local moves need two distinct peers), got " +
                          std::to_string(swarm_size));
    }
    if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
    if (!(switch_probability >= 0.0 && switch_probability <= 1.0)) {
        throw ConfigError("switch_probability must lie in [0, 1], got " +
                          std::to_string(switch_probability));
    }
    if (!(levy_exponent > 0.0 && levy_exponent <= 2.0)) {
        throw ConfigError("levy_exponent must lie in (0, 2], got " + std::to_string(levy_exponent));
    }
    if (!(global_step_scale > 0.0) || !std::isfinite(global_step_scale)) {
        throw ConfigError("global_step_scale must be a positive finite number, got " +
                          std::to_string(global_step_scale));
    }
}

// ---------------------------------------------------------------------------
// Optimizer

Optimizer::Optimizer(FpaConfig config, bench::BenchmarkFunction objective)
    : config_((config.validate(), config)),
      objective_(std::move(objective)),
      levy_(config_.levy_exponent) {
    if (objective_.dimension < 1 || !objective_.evaluator) {
        throw ConfigError("objective is not initialized");
    }
}

double Optimizer::evaluate(Pollen& pollen) {
    if (pollen.evaluate(objective_)) ++evaluations_;
    return pollen.cached_fitness();
}

Population Optimizer::initialize_population(RngStream& rng) {
    const auto& b = objective_.bounds;
    const double width = b.upper() - b.lower();
    Population pop;
    pop.members.reserve(config_.swarm_size);
    for (std::size_t i = 0; i < config_.swarm_size; ++i) {
        std::vector<double> x(objective_.dimension);
        for (double& c : x) c = std::min(b.lower() + width * rng.uniform(), b.upper());
        Pollen p(std::move(x));
        evaluate(p);
        pop.members.push_back(std::move(p));
    }
    pop.best = pop.members[pop.argmin()];
    return pop;
}

Pollen Optimizer::global_pollination(const Pollen& current, const Pollen& best,
                                     RngStream& rng) const {
    const std::size_t d = current.dimension();
    if (best.dimension() != d) throw DimensionError("global_pollination: dimension mismatch");
    std::vector<double> step(d);
    levy_.fill(rng, step);
    const double sign = config_.direction == GlobalStepDirection::toward_best ? 1.0 : -1.0;
    const auto& x = current.position();
    const auto& g = best.position();
    std::vector<double> next(d);
    for (std::size_t i = 0; i < d; ++i) {
        next[i] = x[i] + config_.global_step_scale * step[i] * sign * (g[i] - x[i]);
    }
    return Pollen(clamp(next, objective_.bounds));
}

Pollen Optimizer::local_pollination(const Pollen& current, std::span<const Pollen> members,
                                    std::size_t j, std::size_t k, RngStream& rng) const {
    if (j == k) {
        throw DistinctnessError("local_pollination: peers must be distinct, got j = k = " +
                                std::to_string(j));
    }
    if (j >= members.size() || k >= members.size()) {
        throw DistinctnessError("local_pollination: peer index out of range");
    }
    const std::size_t d = current.dimension();
    const auto& x = current.position();
    const auto& xj = members[j].position();
    const auto& xk = members[k].position();
    if (xj.size() != d || xk.size() != d) {
        throw DimensionError("local_pollination: dimension mismatch");
    }
    std::vector<double> next(d);
    if (config_.local_scaling == LocalScaling::scalar) {
        const double eps = rng.uniform();
        for (std::size_t i = 0; i < d; ++i) next[i] = x[i] + eps * (xj[i] - xk[i]);
    } else {
        for (std::size_t i = 0; i < d; ++i) next[i] = x[i] + rng.uniform() * (xj[i] - xk[i]);
    }
    return Pollen(clamp(next, objective_.bounds));
}

void Optimizer::step_generation(Population& pop, RngStream& rng) {
    const std::size_t n = pop.size();
    if (n < 2) throw PopulationTooSmallError("step_generation: population has fewer than 2 members");
    for (std::size_t i = 0; i < n; ++i) {
        Pollen candidate;
        if (rng.uniform() < config_.switch_probability) {
            candidate = global_pollination(pop.members[i], pop.best, rng);
            ++global_moves_;
        } else {
            // draw order: peers, then epsilon
            const auto [j, k] = pick_two_distinct(rng, n);
            candidate = local_pollination(pop.members[i], pop.members, j, k, rng);
            ++local_moves_;
        }
        const double f = evaluate(candidate);
        if (hooks_.on_candidate) hooks_.on_candidate(candidate);
        if (f < pop.members[i].cached_fitness()) pop.members[i] = std::move(candidate);
    }
    const std::size_t best = pop.argmin();
    if (pop.members[best].cached_fitness() < pop.best.cached_fitness()) pop.best = pop.members[best];
}

RunResult Optimizer::run() {
    evaluations_ = 0;
    global_moves_ = 0;
    local_moves_ = 0;
    RngStream rng(config_.seed);
    Population pop = initialize_population(rng);

    RunResult result;
    result.function = objective_.name;
    result.dimension = objective_.dimension;
    result.config = config_;
    result.fitness_trace.reserve(config_.max_generations);
    for (std::size_t gen = 0; gen < config_.max_generations; ++gen) {
        step_generation(pop, rng);
        result.fitness_trace.push_back(pop.best.cached_fitness());
        if (hooks_.on_generation) hooks_.on_generation(gen, pop);
    }
    result.best_fitness = pop.best.cached_fitness();
    result.best_position = pop.best.position();
    result.evaluations_used = evaluations_;
    result.global_moves = global_moves_;
    result.local_moves = local_moves_;
    return result;
}

RunResult run(const FpaConfig& config, const bench::BenchmarkFunction& objective) {
    return Optimizer(config, objective).run();
}

RunResult run_improved(FpaConfig config, const bench::BenchmarkFunction& objective,
                       const SwitchProbabilitySchedule& schedule) {
    config.switch_probability = switch_probability_for(objective.dimension, schedule);
    RunResult result = Optimizer(config, objective).run();
    result.algorithm = Algorithm::proposed;
    result.schedule = schedule;
    return result;
}

}  // namespace fpa

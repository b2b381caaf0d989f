#pragma once

// Flower pollination engine. Each generation sweeps the swarm in index order;
// member i takes a global (Levy flight relative to the best) move with
// probability p and a local (scaled peer difference) move otherwise. The
// candidate replaces its incumbent only when strictly better, and the best is
// refreshed once the sweep is complete.
//
// The "proposed" variant is the same engine with p picked from a
// dimension-keyed schedule instead of the fixed 0.8.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fpa/benchmarks.hpp"
#include "fpa/core.hpp"
#include "fpa/levy.hpp"

namespace fpa {

inline constexpr double kOriginalSwitchProbability = 0.8;

/// Scale on the Levy displacement. Chosen so the original algorithm lands
/// near the reference baseline means on the six-function suite.
inline constexpr double kDefaultGlobalStepScale = 2.0;

/// Direction of the global move.
///   toward_best:    x + gamma L (g* - x)
///   away_from_best: x + gamma L (x - g*)
enum class GlobalStepDirection { toward_best, away_from_best };

/// One epsilon per local move, or an independent epsilon per coordinate.
enum class LocalScaling { scalar, per_coordinate };

enum class Algorithm { original, proposed };

std::string_view to_string(Algorithm a) noexcept;
/// "FPA" / "Proposed FPA"
std::string_view display_name(Algorithm a) noexcept;
Algorithm parse_algorithm(std::string_view text);
std::string_view to_string(GlobalStepDirection d) noexcept;
std::string_view to_string(LocalScaling s) noexcept;

/// Piecewise-constant map from problem dimension to switch probability.
/// Dimensions between anchors take the nearest anchor; an exact midpoint goes
/// to the lower-dimension anchor.
class SwitchProbabilitySchedule {
public:
    struct Anchor {
        std::size_t dimension;
        double probability;
        friend bool operator==(const Anchor&, const Anchor&) = default;
    };

    /// Anchors are sorted by dimension. Throws ConfigError on an empty list,
    /// duplicate dimensions, probabilities outside (0, 1], or probabilities that
    /// increase with dimension.
    explicit SwitchProbabilitySchedule(std::vector<Anchor> anchors);

    /// {10 -> 0.5, 30 -> 0.2, 50 -> 0.1}
    static SwitchProbabilitySchedule standard();

    /// Parses "10:0.5,30:0.2,50:0.1".
    static SwitchProbabilitySchedule parse(std::string_view text);
    std::string to_string() const;

    const std::vector<Anchor>& anchors() const noexcept { return anchors_; }
    double at(std::size_t dimension) const;

    friend bool operator==(const SwitchProbabilitySchedule&,
                           const SwitchProbabilitySchedule&) = default;

private:
    std::vector<Anchor> anchors_;
};

double switch_probability_for(std::size_t dimension, const SwitchProbabilitySchedule& schedule);

struct FpaConfig {
    std::size_t swarm_size = 50;
    std::size_t max_generations = 1000;
    double switch_probability = kOriginalSwitchProbability;
    double levy_exponent = levy::kDefaultExponent;
    double global_step_scale = kDefaultGlobalStepScale;
    std::uint64_t seed = 0;
    GlobalStepDirection direction = GlobalStepDirection::toward_best;
    LocalScaling local_scaling = LocalScaling::scalar;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const FpaConfig&, const FpaConfig&) = default;
};

struct RunResult {
    Algorithm algorithm = Algorithm::original;
    std::string function;
    std::size_t dimension = 0;
    FpaConfig config;
    std::optional<SwitchProbabilitySchedule> schedule;  ///< set for the proposed variant

    double best_fitness = 0.0;
    std::vector<double> best_position;
    std::vector<double> fitness_trace;  ///< best-so-far after each generation
    std::size_t evaluations_used = 0;
    std::size_t global_moves = 0;
    std::size_t local_moves = 0;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

/// Optional callbacks for instrumented runs.
struct RunHooks {
    std::function<void(const Pollen& candidate)> on_candidate;
    std::function<void(std::size_t generation, const Population&)> on_generation;
};

/// Single-run engine bound to one objective. Not thread-safe; use one per run.
class Optimizer {
public:
    Optimizer(FpaConfig config, bench::BenchmarkFunction objective);

    const FpaConfig& config() const noexcept { return config_; }
    const bench::BenchmarkFunction& objective() const noexcept { return objective_; }

    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t global_moves() const noexcept { return global_moves_; }
    std::size_t local_moves() const noexcept { return local_moves_; }

    void set_hooks(RunHooks hooks) { hooks_ = std::move(hooks); }

    /// swarm_size pollen drawn uniformly in the bounds, all evaluated.
    Population initialize_population(RngStream& rng);

    /// Unevaluated candidate clamp(x + gamma L (g* - x)) for a fresh Levy vector L
    /// (sign flipped for away_from_best).
    Pollen global_pollination(const Pollen& current, const Pollen& best, RngStream& rng) const;

    /// Unevaluated candidate clamp(x + eps (x_j - x_k)) with eps ~ U[0,1).
    /// Throws DistinctnessError when j == k.
    Pollen local_pollination(const Pollen& current, std::span<const Pollen> members, std::size_t j,
                             std::size_t k, RngStream& rng) const;

    /// One sweep over the swarm followed by the best update.
    void step_generation(Population& population, RngStream& rng);

    /// Fresh run from config().seed.
    RunResult run();

private:
    double evaluate(Pollen& pollen);

    FpaConfig config_;
    bench::BenchmarkFunction objective_;
    levy::Sampler levy_;
    RunHooks hooks_;
    std::size_t evaluations_ = 0;
    std::size_t global_moves_ = 0;
    std::size_t local_moves_ = 0;
};

/// Original algorithm with config.switch_probability as given.
RunResult run(const FpaConfig& config, const bench::BenchmarkFunction& objective);

/// Proposed variant: config.switch_probability is replaced by the schedule's
/// value for the objective's dimension.
RunResult run_improved(FpaConfig config, const bench::BenchmarkFunction& objective,
                       const SwitchProbabilitySchedule& schedule);

}  // namespace fpa

#pragma once

// Domain types shared by the sampler, the engine and the harness:
// box bounds, candidate solutions, the swarm, and the seeded random stream.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fpa/error.hpp"

namespace fpa {

/// Hypercube search space: the same [lower, upper] interval on every coordinate.
class Bounds {
public:
    Bounds(double lower, double upper);

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    bool contains(double x) const noexcept { return x >= lower_ && x <= upper_; }
    bool contains(std::span<const double> x) const noexcept;

    friend bool operator==(const Bounds&, const Bounds&) = default;

private:
    double lower_;
    double upper_;
};

/// Coordinate-wise saturation into `bounds`. Throws NonFiniteError naming the
/// first non-finite coordinate.
std::vector<double> clamp(std::span<const double> position, const Bounds& bounds);

/// One candidate solution. The fitness is a cache of the objective at the
/// current position; moving the pollen drops it.
class Pollen {
public:
    Pollen() = default;
    explicit Pollen(std::vector<double> position) : position_(std::move(position)) {}
    Pollen(std::vector<double> position, double fitness)
        : position_(std::move(position)), fitness_(fitness) {}

    const std::vector<double>& position() const noexcept { return position_; }
    std::size_t dimension() const noexcept { return position_.size(); }

    std::optional<double> fitness() const noexcept { return fitness_; }
    bool evaluated() const noexcept { return fitness_.has_value(); }

    /// Cached fitness; throws Error if the pollen was never evaluated.
    double cached_fitness() const;

    void move_to(std::vector<double> position) {
        position_ = std::move(position);
        fitness_.reset();
    }

    /// Evaluates the objective unless the cache is warm. Returns true when the
    /// objective was actually called.
    template <typename Objective>
    bool evaluate(const Objective& objective) {
        if (fitness_) return false;
        fitness_ = objective(std::span<const double>(position_));
        return true;
    }

private:
    std::vector<double> position_;
    std::optional<double> fitness_;
};

/// The swarm plus its tracked global best.
struct Population {
    std::vector<Pollen> members;
    Pollen best;

    std::size_t size() const noexcept { return members.size(); }
    /// Index of the first member with the lowest fitness. All members must be evaluated.
    std::size_t argmin() const;
};

/// Seeded 64-bit stream: xoshiro256** state seeded through SplitMix64.
/// Every draw is computed with integer and IEEE double arithmetic only, so a
/// seed reproduces the same sequence on any platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform in [0, 1); advances the stream exactly one step.
    double uniform() noexcept;

    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) noexcept;

    /// Normal(mean, stddev²) by the Marsaglia polar method.
    double normal(double mean = 0.0, double stddev = 1.0) noexcept;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
    std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed of run `run_index` under `master_seed`. Depends only on the pair, so
/// the first k runs of any experiment are the same for every run count >= k.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept;

/// Two distinct uniformly chosen indices in [0, n). Throws PopulationTooSmallError for n < 2.
std::pair<std::size_t, std::size_t> pick_two_distinct(RngStream& rng, std::size_t n);

}  // namespace fpa

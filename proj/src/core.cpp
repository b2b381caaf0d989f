#include "fpa/core.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace fpa {

Bounds::Bounds(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper)) {
        throw ConfigError("bounds must be finite, got [" + std::to_string(lower) + ", " +
                          std::to_string(upper) + "]");
    }
    if (!(lower < upper)) {
        throw ConfigError("bounds require lower < upper, got [" + std::to_string(lower) + ", " +
                          std::to_string(upper) + "]");
    }
}

bool Bounds::contains(std::span<const double> x) const noexcept {
    for (double c : x) {
        if (!contains(c)) return false;
    }
    return true;
}

std::vector<double> clamp(std::span<const double> position, const Bounds& bounds) {
    std::vector<double> out(position.size());
    for (std::size_t i = 0; i < position.size(); ++i) {
        const double c = position[i];
        if (!std::isfinite(c)) {
            throw NonFiniteError("clamp: coordinate " + std::to_string(i) + " is not finite");
        }
        out[i] = c < bounds.lower() ? bounds.lower() : (c > bounds.upper() ? bounds.upper() : c);
    }
    return out;
}

double Pollen::cached_fitness() const {
    if (!fitness_) throw Error("pollen has not been evaluated");
    return *fitness_;
}

std::size_t Population::argmin() const {
    if (members.empty()) throw PopulationTooSmallError("population is empty");
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        if (members[i].cached_fitness() < members[best].cached_fitness()) best = i;
    }
    return best;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) noexcept {
    return mix64(mix64(master_seed) ^ (run_index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed) : seed_(seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s += 0x9E3779B97F4A7C15ULL;
        word = mix64(s - 0x9E3779B97F4A7C15ULL);
    }
}

std::uint64_t RngStream::next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::uniform() noexcept {
    // top 53 bits scaled by 2^-53
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

double RngStream::normal(double mean, double stddev) noexcept {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return mean + stddev * z;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    return mean + stddev * (u * factor);
}

std::pair<std::size_t, std::size_t> pick_two_distinct(RngStream& rng, std::size_t n) {
    if (n < 2) {
        throw PopulationTooSmallError("need at least 2 members to pick two distinct peers, got " +
                                      std::to_string(n));
    }
    const auto j = static_cast<std::size_t>(rng.below(n));
    auto k = static_cast<std::size_t>(rng.below(n - 1));
    if (k >= j) ++k;
    return {j, k};
}

}  // namespace fpa

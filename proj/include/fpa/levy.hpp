#pragma once

#include <cstddef>
#include <vector>

#include "fpa/core.hpp"

namespace fpa::levy {

inline constexpr double kDefaultExponent = 1.5;

/// Denominator normals smaller than this in magnitude are redrawn.
inline constexpr double kMinDenominator = 1e-300;

struct LevyConfig {
    double exponent = kDefaultExponent;  ///< tail index, 0 < exponent <= 2
    std::size_t dimension = 1;

    /// Throws ConfigError when the exponent or dimension is out of range.
    void validate() const;
};

/// Scale of the numerator normal in Mantegna's construction:
///   sigma_u = [ Gamma(1+l) sin(pi l / 2) / ( Gamma((1+l)/2) l 2^((l-1)/2) ) ]^(1/l)
double mantegna_sigma(double exponent);

/// Mantegna sampler with the scale precomputed; draws u / |v|^(1/exponent)
/// with u ~ N(0, sigma_u^2), v ~ N(0, 1). Exponent 2 draws N(0, 2) directly.
class Sampler {
public:
    explicit Sampler(double exponent);

    double exponent() const noexcept { return exponent_; }
    double sigma() const noexcept { return sigma_; }

    double scalar(RngStream& rng) const;
    /// Fills `out` with independent draws.
    void fill(RngStream& rng, std::vector<double>& out) const;

private:
    double exponent_;
    double sigma_;
};

/// One step vector of length cfg.dimension.
std::vector<double> levy_step(RngStream& rng, const LevyConfig& cfg);

}  // namespace fpa::levy

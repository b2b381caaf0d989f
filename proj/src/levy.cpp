#include "fpa/levy.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fpa::levy {

namespace {

void check_exponent(double exponent) {
    if (!(exponent > 0.0 && exponent <= 2.0)) {
        throw ConfigError("levy exponent must lie in (0, 2], got " + std::to_string(exponent));
    }
}

}  // namespace

void LevyConfig::validate() const {
    check_exponent(exponent);
    if (dimension < 1) throw ConfigError("levy step dimension must be >= 1");
}

double mantegna_sigma(double exponent) {
    check_exponent(exponent);
    const double num = std::tgamma(1.0 + exponent) * std::sin(std::numbers::pi * exponent / 2.0);
    const double den = std::tgamma((1.0 + exponent) / 2.0) * exponent *
                       std::pow(2.0, (exponent - 1.0) / 2.0);
    return std::pow(num / den, 1.0 / exponent);
}

Sampler::Sampler(double exponent) : exponent_(exponent), sigma_(mantegna_sigma(exponent)) {}

double Sampler::scalar(RngStream& rng) const {
    // The ratio construction degenerates at exponent 2 (sigma_u -> 0, infinite
    // variance); the stable law there is Normal(0, 2).
    if (exponent_ == 2.0) return rng.normal(0.0, std::numbers::sqrt2);
    for (;;) {
        const double u = rng.normal(0.0, sigma_);
        double v = rng.normal();
        while (std::abs(v) < kMinDenominator) v = rng.normal();
        const double step = u / std::pow(std::abs(v), 1.0 / exponent_);
        // small exponents can overflow |v|^(1/exponent) toward zero
        if (std::isfinite(step)) return step;
    }
}

void Sampler::fill(RngStream& rng, std::vector<double>& out) const {
    for (double& x : out) x = scalar(rng);
}

std::vector<double> levy_step(RngStream& rng, const LevyConfig& cfg) {
    cfg.validate();
    std::vector<double> out(cfg.dimension);
    Sampler(cfg.exponent).fill(rng, out);
    return out;
}

}  // namespace fpa::levy

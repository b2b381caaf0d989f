#include "fpa/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fpa::bench {

namespace {

void require_nonempty(std::span<const double> x, const char* fn) {
    if (x.empty()) throw DimensionError(std::string(fn) + ": input vector is empty");
}

}  // namespace

std::string_view to_string(Modality m) noexcept {
    return m == Modality::unimodal ? "unimodal" : "multimodal";
}

double sphere(std::span<const double> x) {
    require_nonempty(x, "sphere");
    double sum = 0.0;
    for (double c : x) sum += c * c;
    return sum;
}

double griewank(std::span<const double> x) {
    require_nonempty(x, "griewank");
    double sum = 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i];
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return 1.0 + sum / 4000.0 - prod;
}

double step_fn(std::span<const double> x) {
    require_nonempty(x, "step");
    double sum = 0.0;
    for (double c : x) {
        const double f = std::floor(c + 0.5);
        sum += f * f;
    }
    return sum;
}

double rosenbrock(std::span<const double> x) {
    if (x.size() < 2) {
        throw DimensionError("rosenbrock: needs at least 2 coordinates, got " +
                             std::to_string(x.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        sum += 100.0 * a * a + b * b;
    }
    return sum;
}

double zakharov(std::span<const double> x) {
    require_nonempty(x, "zakharov");
    double squares = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        squares += x[i] * x[i];
        weighted += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    const double w2 = weighted * weighted;
    return squares + w2 + w2 * w2;
}

// Terms reach about 600 in magnitude while their mean can sit near zero, so
// terms and sum are formed in extended precision to keep the relative error
// of the result near one rounding.
double himmelblau_variant(std::span<const double> x) {
    require_nonempty(x, "himmelblau");
    long double sum = 0.0L;
    for (double v : x) {
        const long double c = v;
        const long double c2 = c * c;
        sum += c2 * c2 - 16.0L * c2 + 5.0L * c;
    }
    return static_cast<double>(sum / static_cast<long double>(x.size()));
}

double himmelblau_literal(std::span<const double> x) {
    require_nonempty(x, "himmelblau");
    long double sum = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double c = x[i];
        const long double c2 = c * c;
        sum += static_cast<long double>(i + 1) * c2 * c2 - 16.0L * c2 + 5.0L * c;
    }
    return static_cast<double>(sum / static_cast<long double>(x.size()));
}

ScalarMinimum himmelblau_term_minimum(double w) {
    // Stationary points solve 4w t^3 - 32 t + 5 = 0. The global minimum is the
    // leftmost root, bracketed by [-5, -sqrt(8 / (3w))] where the cubic changes sign.
    const auto slope = [w](double t) { return 4.0 * w * t * t * t - 32.0 * t + 5.0; };
    double lo = -5.0;
    double hi = -std::sqrt(8.0 / (3.0 * w));
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    const double t = 0.5 * (lo + hi);
    const double t2 = t * t;
    return {t, w * t2 * t2 - 16.0 * t2 + 5.0 * t};
}

double BenchmarkFunction::operator()(std::span<const double> x) const {
    if (x.size() != dimension) {
        throw DimensionError(name + ": expected " + std::to_string(dimension) +
                             " coordinates, got " + std::to_string(x.size()));
    }
    return evaluator(x);
}

const std::vector<std::string>& names() {
    static const std::vector<std::string> all{"himmelblau", "griewank", "step",
                                              "sphere",     "rosenbrock", "zakharov"};
    return all;
}

BenchmarkFunction registry_lookup(std::string_view name, std::size_t dimension,
                                  HimmelblauForm form) {
    const auto& valid = names();
    if (std::find(valid.begin(), valid.end(), name) == valid.end()) {
        std::string list;
        for (const auto& n : valid) list += (list.empty() ? "" : ", ") + n;
        throw LookupError("unknown function '" + std::string(name) + "'; valid names: " + list);
    }
    const std::size_t min_dim = name == "rosenbrock" ? 2 : 1;
    if (dimension < min_dim) {
        throw DimensionError(std::string(name) + ": dimension must be >= " +
                             std::to_string(min_dim) + ", got " + std::to_string(dimension));
    }

    BenchmarkFunction f;
    f.name = std::string(name);
    f.dimension = dimension;
    const auto zeros = std::vector<double>(dimension, 0.0);

    if (name == "himmelblau") {
        f.number = 1;
        f.display_name = "Himmelblau";
        f.bounds = Bounds(-5.0, 5.0);
        f.modality = Modality::multimodal;
        std::vector<double> argmin(dimension);
        for (std::size_t i = 0; i < dimension; ++i) {
            const double w = form == HimmelblauForm::literal ? static_cast<double>(i + 1) : 1.0;
            argmin[i] = himmelblau_term_minimum(w).argmin;
        }
        // Terms are independent per coordinate, so the coordinate-wise argmin is the global one.
        f.evaluator = form == HimmelblauForm::literal ? himmelblau_literal : himmelblau_variant;
        f.known_minimum_value = f.evaluator(argmin);
        f.known_minimizer = std::move(argmin);
    } else if (name == "griewank") {
        f.number = 2;
        f.display_name = "Griewank";
        f.bounds = Bounds(-600.0, 600.0);
        f.modality = Modality::multimodal;
        f.evaluator = griewank;
        f.known_minimum_value = 0.0;
        f.known_minimizer = zeros;
    } else if (name == "step") {
        f.number = 3;
        f.display_name = "Step";
        f.bounds = Bounds(-100.0, 100.0);
        f.modality = Modality::multimodal;
        f.evaluator = step_fn;
        f.known_minimum_value = 0.0;
        f.known_minimizer = zeros;
    } else if (name == "sphere") {
        f.number = 4;
        f.display_name = "Sphere";
        f.bounds = Bounds(-5.12, 5.12);
        f.modality = Modality::unimodal;
        f.evaluator = sphere;
        f.known_minimum_value = 0.0;
        f.known_minimizer = zeros;
    } else if (name == "rosenbrock") {
        f.number = 5;
        f.display_name = "Rosenbrock";
        f.bounds = Bounds(-15.0, 15.0);
        f.modality = Modality::unimodal;
        f.evaluator = rosenbrock;
        f.known_minimum_value = 0.0;
        f.known_minimizer = std::vector<double>(dimension, 1.0);
    } else {
        f.number = 6;
        f.display_name = "Zakharov";
        f.bounds = Bounds(-5.0, 10.0);
        f.modality = Modality::unimodal;
        f.evaluator = zakharov;
        f.known_minimum_value = 0.0;
        f.known_minimizer = zeros;
    }
    return f;
}

}  // namespace fpa::bench

#pragma once

// The six test objectives: himmelblau, griewank, step, sphere, rosenbrock and
// zakharov, plus a name-keyed registry. All are minimization problems over a
// hypercube. Coordinate indices inside the formulas are 1-based.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fpa/core.hpp"

namespace fpa::bench {

enum class Modality { unimodal, multimodal };

std::string_view to_string(Modality m) noexcept;

/// Which himmelblau formula the registry hands out.
///   standard: (1/d) sum_i (x_i^4 - 16 x_i^2 + 5 x_i)
///   literal:  (1/d) sum_i (i x_i^4 - 16 x_i^2 + 5 x_i), the form with the
///             stray index factor on the quartic term
enum class HimmelblauForm { standard, literal };

using Evaluator = std::function<double(std::span<const double>)>;

struct BenchmarkFunction {
    std::string name;
    int number = 0;  ///< position in the comparison tables, 1..6
    std::string display_name;
    std::size_t dimension = 0;
    Evaluator evaluator;
    Bounds bounds{-1.0, 1.0};
    Modality modality = Modality::unimodal;
    std::optional<double> known_minimum_value;
    std::optional<std::vector<double>> known_minimizer;

    /// Checks the length, then evaluates.
    double operator()(std::span<const double> x) const;
};

double sphere(std::span<const double> x);
double griewank(std::span<const double> x);
double step_fn(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double zakharov(std::span<const double> x);
double himmelblau_variant(std::span<const double> x);
double himmelblau_literal(std::span<const double> x);

/// Minimum over t of (weight t^4 - 16 t^2 + 5 t) and its minimizer.
struct ScalarMinimum {
    double argmin;
    double value;
};
ScalarMinimum himmelblau_term_minimum(double quartic_weight);

/// Registry names in table order.
const std::vector<std::string>& names();

/// Throws LookupError for unknown names and DimensionError for dimensions the
/// function does not admit.
BenchmarkFunction registry_lookup(std::string_view name, std::size_t dimension,
                                  HimmelblauForm form = HimmelblauForm::standard);

}  // namespace fpa::bench

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "benchmark_oracles.hpp"
#include "fpa/benchmarks.hpp"

using namespace fpa;
using bench::registry_lookup;

namespace {

std::vector<double> random_point(RngStream& rng, const bench::BenchmarkFunction& f) {
    std::vector<double> x(f.dimension);
    const double w = f.bounds.upper() - f.bounds.lower();
    for (double& c : x) c = f.bounds.lower() + w * rng.uniform();
    return x;
}

}  // namespace

TEST_CASE("sphere") {
    CHECK(bench::sphere(std::vector{0.0, 0.0, 0.0}) == 0.0);
    CHECK(bench::sphere(std::vector{1.0, 1.0}) == 2.0);
    CHECK(bench::sphere(std::vector{3.0, -4.0}) == 25.0);
    CHECK_THROWS_AS(bench::sphere(std::vector<double>{}), DimensionError);
}

TEST_CASE("griewank") {
    CHECK(bench::griewank(std::vector{0.0, 0.0, 0.0, 0.0}) == 0.0);
    const std::vector x{100.0, 100.0};
    CHECK(bench::griewank(x) == doctest::Approx(static_cast<double>(oracle::griewank(x))).epsilon(1e-13));
    const double single = bench::griewank(std::vector{600.0});
    CHECK(single == doctest::Approx(91.0 - std::cos(600.0)).epsilon(1e-14));
    CHECK(std::abs(single - 91.0) <= 1.0);
    CHECK_THROWS_AS(bench::griewank(std::vector<double>{}), DimensionError);
}

TEST_CASE("step") {
    CHECK(bench::step_fn(std::vector{0.4, -0.4}) == 0.0);
    CHECK(bench::step_fn(std::vector{1.6}) == 4.0);
    // floor(-2.0) = -2 at the half-integer edge
    CHECK(bench::step_fn(std::vector{-2.5}) == 4.0);
    CHECK(static_cast<double>(oracle::step(std::vector{-2.5})) == 4.0);
    CHECK_THROWS_AS(bench::step_fn(std::vector<double>{}), DimensionError);
}

TEST_CASE("rosenbrock") {
    CHECK(bench::rosenbrock(std::vector{1.0, 1.0, 1.0, 1.0}) == 0.0);
    CHECK(bench::rosenbrock(std::vector{0.0, 0.0}) == 1.0);
    CHECK(bench::rosenbrock(std::vector{-1.0, 1.0}) == 4.0);
    CHECK_THROWS_AS(bench::rosenbrock(std::vector{1.0}), DimensionError);
}

TEST_CASE("zakharov") {
    CHECK(bench::zakharov(std::vector{0.0, 0.0, 0.0}) == 0.0);
    CHECK(bench::zakharov(std::vector{1.0, 1.0}) == doctest::Approx(9.3125).epsilon(1e-15));
    CHECK(static_cast<double>(oracle::zakharov(std::vector{1.0, 1.0})) == 9.3125);
    CHECK(bench::zakharov(std::vector{1.0}) == 1.3125);
    CHECK_THROWS_AS(bench::zakharov(std::vector<double>{}), DimensionError);
}

TEST_CASE("himmelblau variant") {
    CHECK(bench::himmelblau_variant(std::vector{0.0, 0.0}) == 0.0);
    CHECK(bench::himmelblau_variant(std::vector{1.0}) == -10.0);
    const auto m = oracle::himmelblau_scalar_min();
    CHECK(static_cast<double>(m.t) == doctest::Approx(-2.903534).epsilon(1e-6));
    CHECK(static_cast<double>(m.value) == doctest::Approx(-78.332).epsilon(1e-5));
    const std::vector x{-2.903534, -2.903534};
    CHECK(bench::himmelblau_variant(x) == doctest::Approx(-78.332).epsilon(1e-5));
    CHECK_THROWS_AS(bench::himmelblau_variant(std::vector<double>{}), DimensionError);

    const auto term = bench::himmelblau_term_minimum(1.0);
    CHECK(term.argmin == doctest::Approx(static_cast<double>(m.t)).epsilon(1e-9));
    CHECK(std::abs(term.value - static_cast<double>(m.value)) <= 1e-12);
}

TEST_CASE("himmelblau literal form keeps the index factor") {
    // (1/2) [ (1 - 16 + 5) + (2 - 16 + 5) ]
    CHECK(bench::himmelblau_literal(std::vector{1.0, 1.0}) == -9.5);
    const auto f = registry_lookup("himmelblau", 4, bench::HimmelblauForm::literal);
    RngStream rng(1);
    for (int i = 0; i < 20000; ++i) {
        const auto x = random_point(rng, f);
        REQUIRE(f(x) >= *f.known_minimum_value - 1e-12);
    }
}

TEST_CASE("registry lookup") {
    const auto g = registry_lookup("griewank", 30);
    CHECK(g.bounds == Bounds(-600.0, 600.0));
    CHECK(g.modality == bench::Modality::multimodal);
    CHECK(g.dimension == 30);
    const auto s = registry_lookup("sphere", 10);
    CHECK(s.bounds == Bounds(-5.12, 5.12));
    CHECK(s.modality == bench::Modality::unimodal);
    CHECK_THROWS_AS(registry_lookup("rosenbrock", 1), DimensionError);
    CHECK_THROWS_AS(registry_lookup("sphere", 0), DimensionError);
    try {
        registry_lookup("nosuch", 10);
        FAIL("expected LookupError");
    } catch (const LookupError& e) {
        const std::string msg = e.what();
        for (const auto& n : bench::names()) CHECK(msg.find(n) != std::string::npos);
    }
    const auto h = registry_lookup("himmelblau", 10);
    CHECK(h.bounds == Bounds(-5.0, 5.0));
    CHECK(registry_lookup("step", 10).bounds == Bounds(-100.0, 100.0));
    CHECK(registry_lookup("rosenbrock", 10).bounds == Bounds(-15.0, 15.0));
    CHECK(registry_lookup("zakharov", 10).bounds == Bounds(-5.0, 10.0));
    CHECK_THROWS_AS(h(std::vector<double>(9, 0.0)), DimensionError);
}

TEST_CASE("known minimizers evaluate to the known minimum") {
    for (const auto& name : bench::names()) {
        for (std::size_t d : {2u, 10u, 30u, 50u}) {
            const auto f = registry_lookup(name, d);
            CAPTURE(name);
            CAPTURE(d);
            REQUIRE(f.known_minimizer.has_value());
            REQUIRE(f.known_minimum_value.has_value());
            CHECK(std::abs(f(*f.known_minimizer) - *f.known_minimum_value) <= 1e-12);
            if (name == "himmelblau") {
                CHECK(std::abs(*f.known_minimum_value - static_cast<double>(oracle::himmelblau_scalar_min().value)) <= 1e-12);
            } else {
                CHECK(*f.known_minimum_value == 0.0);
            }
        }
    }
}

TEST_CASE("no in-bounds point beats the known minimum") {
    RngStream rng(314);
    for (const auto& name : bench::names()) {
        const auto f = registry_lookup(name, 10);
        CAPTURE(name);
        for (int i = 0; i < 100000; ++i) {
            const auto x = random_point(rng, f);
            REQUIRE(f(x) >= *f.known_minimum_value - 1e-12);
        }
    }
}

TEST_CASE("step is constant on plateaus") {
    RngStream rng(15);
    for (int i = 0; i < 5000; ++i) {
        std::vector<double> x(6), y(6);
        for (std::size_t c = 0; c < x.size(); ++c) {
            // centre of a plateau plus a perturbation that stays inside it
            const double centre = std::floor(-100.0 + 200.0 * rng.uniform());
            x[c] = centre + 0.49 * (2.0 * rng.uniform() - 1.0);
            y[c] = centre + 0.49 * (2.0 * rng.uniform() - 1.0);
        }
        REQUIRE(bench::step_fn(x) == bench::step_fn(y));
    }
}

TEST_CASE("permutation symmetry where the formula is symmetric") {
    RngStream rng(27);
    for (int i = 0; i < 2000; ++i) {
        std::vector<double> x(7);
        for (double& c : x) c = -5.0 + 10.0 * rng.uniform();
        auto y = x;
        std::reverse(y.begin(), y.end());
        std::rotate(y.begin(), y.begin() + 2, y.end());
        CHECK(bench::sphere(x) == doctest::Approx(bench::sphere(y)).epsilon(1e-14));
        CHECK(bench::step_fn(x) == bench::step_fn(y));
        CHECK(bench::himmelblau_variant(x) == doctest::Approx(bench::himmelblau_variant(y)).epsilon(1e-12));
    }
}

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fpa/engine.hpp"

using namespace fpa;
using bench::registry_lookup;

namespace {

FpaConfig small_config(std::size_t n = 10, std::size_t gens = 50, double p = 0.5, std::uint64_t seed = 1) {
    FpaConfig c;
    c.swarm_size = n;
    c.max_generations = gens;
    c.switch_probability = p;
    c.seed = seed;
    return c;
}

// Mantegna draw replayed from the stream primitives with an independently
// written scale.
double replay_levy(RngStream& rng, double l) {
    const double pi = std::numbers::pi;
    const double sigma = std::pow(std::tgamma(1 + l) * std::sin(pi * l / 2) /
                                      (std::tgamma((1 + l) / 2) * l * std::pow(2.0, (l - 1) / 2)),
                                  1 / l);
    const double u = rng.normal(0.0, sigma);
    const double v = rng.normal();
    return u / std::pow(std::abs(v), 1 / l);
}

}  // namespace

TEST_CASE("config validation names the field") {
    FpaConfig c;
    CHECK_NOTHROW(c.validate());
    const auto expect = [](FpaConfig bad, const char* field) {
        try {
            bad.validate();
            FAIL("expected ConfigError for " << field);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    c.swarm_size = 1;
    expect(c, "swarm_size");
    c = {};
    c.max_generations = 0;
    expect(c, "max_generations");
    c = {};
    c.switch_probability = 1.5;
    expect(c, "switch_probability");
    c = {};
    c.global_step_scale = 0.0;
    expect(c, "global_step_scale");
    c = {};
    c.levy_exponent = 2.5;
    expect(c, "levy_exponent");
}

TEST_CASE("initialize_population") {
    SUBCASE("50 pollen inside the sphere box") {
        FpaConfig c = small_config(50);
        Optimizer opt(c, registry_lookup("sphere", 10));
        RngStream rng(9);
        const auto pop = opt.initialize_population(rng);
        CHECK(pop.size() == 50);
        for (const auto& m : pop.members) {
            CHECK(m.dimension() == 10);
            CHECK(m.evaluated());
            for (double x : m.position()) {
                CHECK(x >= -5.12);
                CHECK(x <= 5.12);
            }
            CHECK(pop.best.cached_fitness() <= m.cached_fitness());
        }
        CHECK(opt.evaluations() == 50);
    }
    SUBCASE("n = 2 keeps the smaller member as best") {
        Optimizer opt(small_config(2), registry_lookup("griewank", 3));
        RngStream rng(4);
        const auto pop = opt.initialize_population(rng);
        CHECK(pop.best.cached_fitness() ==
              std::min(pop.members[0].cached_fitness(), pop.members[1].cached_fitness()));
    }
    SUBCASE("collapsed interval") {
        auto f = registry_lookup("sphere", 4);
        f.bounds = Bounds(0.0, 1e-9);
        Optimizer opt(small_config(8), f);
        RngStream rng(4);
        const auto pop = opt.initialize_population(rng);
        for (const auto& m : pop.members) {
            for (double x : m.position()) CHECK(std::abs(x) <= 1e-9);
        }
        CHECK(pop.best.cached_fitness() <= 4e-18);
    }
}

TEST_CASE("global_pollination") {
    const auto f = registry_lookup("sphere", 2);
    SUBCASE("no displacement when current is the best") {
        Optimizer opt(small_config(), f);
        RngStream rng(3);
        const Pollen p({1.25, -0.75});
        for (int i = 0; i < 100; ++i) CHECK(opt.global_pollination(p, p, rng).position() == p.position());
    }
    SUBCASE("replayed draws") {
        for (double gamma : {1.0, 0.3, 2.0}) {
            FpaConfig c = small_config();
            c.global_step_scale = gamma;
            Optimizer opt(c, f);
            RngStream rng(1234), replay(1234);
            const Pollen current({2.0, 2.0});
            const Pollen best({0.0, 0.0});
            const auto next = opt.global_pollination(current, best, rng);
            const double l0 = replay_levy(replay, 1.5);
            const double l1 = replay_levy(replay, 1.5);
            const auto expected = clamp(std::vector{2.0 - gamma * l0 * 2.0, 2.0 - gamma * l1 * 2.0}, f.bounds);
            CHECK(next.position()[0] == doctest::Approx(expected[0]).epsilon(1e-14));
            CHECK(next.position()[1] == doctest::Approx(expected[1]).epsilon(1e-14));
            CHECK_FALSE(next.evaluated());
        }
    }
    SUBCASE("away_from_best flips the sign") {
        FpaConfig toward = small_config();
        FpaConfig away = toward;
        away.direction = GlobalStepDirection::away_from_best;
        Optimizer a(toward, registry_lookup("sphere", 3)), b(away, registry_lookup("sphere", 3));
        RngStream r1(5), r2(5);
        const Pollen cur({0.5, -0.5, 0.25}), best({0.0, 0.0, 0.0});
        const auto pa = a.global_pollination(cur, best, r1).position();
        const auto pb = b.global_pollination(cur, best, r2).position();
        for (std::size_t i = 0; i < 3; ++i) {
            if (std::abs(pa[i]) < 5.12 && std::abs(pb[i]) < 5.12) {
                CHECK(pa[i] - cur.position()[i] == doctest::Approx(-(pb[i] - cur.position()[i])));
            }
        }
    }
    SUBCASE("dimension mismatch") {
        Optimizer opt(small_config(), f);
        RngStream rng(1);
        CHECK_THROWS_AS(opt.global_pollination(Pollen({1.0, 1.0}), Pollen({1.0}), rng), DimensionError);
    }
}

TEST_CASE("local_pollination") {
    const auto f = registry_lookup("sphere", 2);
    Optimizer opt(small_config(), f);
    SUBCASE("equal peer positions leave the position unchanged") {
        RngStream rng(1);
        const std::vector<Pollen> peers{Pollen({1.0, 2.0}), Pollen({1.0, 2.0})};
        const Pollen cur({0.3, 0.4});
        CHECK(opt.local_pollination(cur, peers, 0, 1, rng).position() == cur.position());
    }
    SUBCASE("replayed epsilon") {
        RngStream rng(77), replay(77);
        const std::vector<Pollen> peers{Pollen({1.0, 0.0}), Pollen({0.0, 1.0})};
        const auto next = opt.local_pollination(Pollen({0.0, 0.0}), peers, 0, 1, rng);
        const double eps = replay.uniform();
        CHECK(next.position() == std::vector{eps, -eps});
    }
    SUBCASE("identical indices are rejected") {
        RngStream rng(1);
        const std::vector<Pollen> peers{Pollen({1.0, 0.0}), Pollen({0.0, 1.0})};
        CHECK_THROWS_AS(opt.local_pollination(Pollen({0.0, 0.0}), peers, 1, 1, rng), DistinctnessError);
    }
    SUBCASE("per-coordinate epsilon") {
        FpaConfig c = small_config();
        c.local_scaling = LocalScaling::per_coordinate;
        Optimizer per(c, f);
        RngStream rng(8), replay(8);
        const std::vector<Pollen> peers{Pollen({1.0, 1.0}), Pollen({0.0, 0.0})};
        const auto next = per.local_pollination(Pollen({0.0, 0.0}), peers, 0, 1, rng);
        const double e0 = replay.uniform();
        const double e1 = replay.uniform();
        CHECK(next.position() == std::vector{e0, e1});
    }
}

TEST_CASE("step_generation branch selection") {
    const auto f = registry_lookup("sphere", 5);
    SUBCASE("p = 1 is all global") {
        Optimizer opt(small_config(20, 1, 1.0), f);
        RngStream rng(2);
        auto pop = opt.initialize_population(rng);
        opt.step_generation(pop, rng);
        CHECK(opt.global_moves() == 20);
        CHECK(opt.local_moves() == 0);
    }
    SUBCASE("p = 0 is all local") {
        Optimizer opt(small_config(20, 1, 0.0), f);
        RngStream rng(2);
        auto pop = opt.initialize_population(rng);
        opt.step_generation(pop, rng);
        CHECK(opt.global_moves() == 0);
        CHECK(opt.local_moves() == 20);
    }
}

TEST_CASE("step_generation replaces only on strict improvement") {
    const auto f = registry_lookup("rosenbrock", 4);
    Optimizer opt(small_config(12, 1, 0.5), f);
    RngStream rng(31);
    auto pop = opt.initialize_population(rng);
    const auto before = pop.members;
    const double best_before = pop.best.cached_fitness();
    std::vector<Pollen> candidates;
    opt.set_hooks({[&](const Pollen& c) { candidates.push_back(c); }, {}});
    opt.step_generation(pop, rng);
    REQUIRE(candidates.size() == before.size());
    std::size_t replaced = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (candidates[i].cached_fitness() < before[i].cached_fitness()) {
            CHECK(pop.members[i].position() == candidates[i].position());
            ++replaced;
        } else {
            CHECK(pop.members[i].position() == before[i].position());
        }
    }
    CHECK(pop.best.cached_fitness() <= best_before);
    CHECK(pop.best.cached_fitness() == pop.members[pop.argmin()].cached_fitness());
    CAPTURE(replaced);
}

TEST_CASE("incumbent at the optimum is retained") {
    const auto f = registry_lookup("sphere", 3);
    Optimizer opt(small_config(3, 1, 0.0), f);
    Population pop;
    pop.members = {Pollen({0.0, 0.0, 0.0}), Pollen({1.0, 1.0, 1.0}), Pollen({-1.0, 2.0, 0.5})};
    for (auto& m : pop.members) m.evaluate(f);
    pop.best = pop.members[0];
    RngStream rng(5);
    opt.step_generation(pop, rng);
    CHECK(pop.members[0].position() == std::vector{0.0, 0.0, 0.0});
    CHECK(pop.best.position() == std::vector{0.0, 0.0, 0.0});
    CHECK(pop.best.cached_fitness() == 0.0);
}

TEST_CASE("run contract") {
    const auto f = registry_lookup("zakharov", 6);
    SUBCASE("one generation gives a trace of length one") {
        const auto r = run(small_config(10, 1), f);
        CHECK(r.fitness_trace.size() == 1);
        CHECK(r.best_fitness == r.fitness_trace.back());
    }
    SUBCASE("identical seeds give identical records") {
        CHECK(run(small_config(10, 40, 0.3, 99), f) == run(small_config(10, 40, 0.3, 99), f));
        CHECK_FALSE(run(small_config(10, 40, 0.3, 99), f) == run(small_config(10, 40, 0.3, 100), f));
    }
    SUBCASE("best position reproduces best fitness") {
        const auto r = run(small_config(10, 40), f);
        CHECK(f(r.best_position) == r.best_fitness);
    }
}

TEST_CASE("engine invariants over many seeded runs") {
    for (const auto& name : bench::names()) {
        const auto f = registry_lookup(name, 5);
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            CAPTURE(name);
            CAPTURE(seed);
            FpaConfig c = small_config(8, 60, 0.2 * static_cast<double>(seed % 5) + 0.1, seed);
            Optimizer opt(c, f);
            bool in_bounds = true;
            opt.set_hooks({[&](const Pollen& p) { in_bounds = in_bounds && f.bounds.contains(p.position()); },
                           [&](std::size_t, const Population& pop) {
                               for (const auto& m : pop.members) {
                                   in_bounds = in_bounds && f.bounds.contains(m.position());
                                   CHECK(pop.best.cached_fitness() <= m.cached_fitness());
                               }
                           }});
            const auto r = opt.run();
            CHECK(in_bounds);
            CHECK(std::is_sorted(r.fitness_trace.rbegin(), r.fitness_trace.rend()));
            CHECK(r.evaluations_used == c.swarm_size * (1 + c.max_generations));
            CHECK(r.global_moves + r.local_moves == c.swarm_size * c.max_generations);
        }
    }
}

TEST_CASE("switch probability schedule") {
    const auto s = SwitchProbabilitySchedule::standard();
    CHECK(switch_probability_for(10, s) == 0.5);
    CHECK(switch_probability_for(30, s) == 0.2);
    CHECK(switch_probability_for(50, s) == 0.1);
    CHECK(s.at(1) == 0.5);
    CHECK(s.at(19) == 0.5);
    CHECK(s.at(20) == 0.5);  // midpoint goes to the lower-dimension anchor
    CHECK(s.at(21) == 0.2);
    CHECK(s.at(40) == 0.2);
    CHECK(s.at(41) == 0.1);
    CHECK(s.at(500) == 0.1);
    CHECK_THROWS_AS(s.at(0), ConfigError);

    CHECK(SwitchProbabilitySchedule::parse("10:0.5,30:0.2,50:0.1") == s);
    CHECK(SwitchProbabilitySchedule::parse(s.to_string()) == s);
    CHECK(SwitchProbabilitySchedule::parse("50:0.1,10:0.5") ==
          SwitchProbabilitySchedule({{10, 0.5}, {50, 0.1}}));
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("10:0.2,30:0.5"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("10:0"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("10:1.5"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("10:0.5,10:0.4"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("abc"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse("10:x"), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule::parse(""), ConfigError);
    CHECK_THROWS_AS(SwitchProbabilitySchedule(std::vector<SwitchProbabilitySchedule::Anchor>{}), ConfigError);
}

TEST_CASE("run_improved") {
    SUBCASE("d = 30 runs at p = 0.2") {
        const auto r = run_improved(small_config(6, 2), registry_lookup("sphere", 30),
                                    SwitchProbabilitySchedule::standard());
        CHECK(r.config.switch_probability == 0.2);
        CHECK(r.algorithm == Algorithm::proposed);
        CHECK(r.schedule == SwitchProbabilitySchedule::standard());
    }
    SUBCASE("a constant schedule reduces to the original algorithm") {
        for (const auto& name : {"sphere", "griewank", "himmelblau"}) {
            const auto f = registry_lookup(name, 10);
            FpaConfig c = small_config(15, 80, 0.123, 555);
            const auto improved = run_improved(c, f, SwitchProbabilitySchedule({{10, 0.8}}));
            c.switch_probability = 0.8;
            const auto original = run(c, f);
            CHECK(improved.best_fitness == original.best_fitness);
            CHECK(improved.best_position == original.best_position);
            CHECK(improved.fitness_trace == original.fitness_trace);
            CHECK(improved.evaluations_used == original.evaluations_used);
            CHECK(improved.global_moves == original.global_moves);
        }
    }
}

TEST_CASE("global branch frequency tracks p") {
    for (double p : {0.1, 0.2, 0.5, 0.8}) {
        FpaConfig c = small_config(50, 200, p, 12);
        const auto r = run(c, registry_lookup("sphere", 5));
        const double freq = static_cast<double>(r.global_moves) / (50.0 * 200.0);
        CAPTURE(p);
        CHECK(std::abs(freq - p) <= 0.02);
    }
}

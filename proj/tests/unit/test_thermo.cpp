#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "circtherm/errors.hpp"
#include "circtherm/thermo.hpp"

#include "../support/oracles.hpp"

using namespace circtherm;
using doctest::Approx;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

/// Degree-two circle map with an attracting fixed point at 0 (Df(0) = 1/2).
CircleMap attracting_doubling() {
    return CircleMap::custom(
        "attracting_doubling", 2, [](double x) { return 2.0 * x - (1.5 / kTwoPi) * std::sin(kTwoPi * x); },
        [](double x) { return 2.0 - 1.5 * std::cos(kTwoPi * x); });
}

}  // namespace

TEST_CASE("pressure on the examples") {
    CHECK(pressure(CircleMap::d_adic(2), 0.0, Scheme::collocation, 64) == Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::fabs(pressure(CircleMap::d_adic(2), 1.0, Scheme::collocation, 64)) <= 1e-12);
    CHECK(pressure(CircleMap::d_adic(3), 2.0, Scheme::ulam, 81) == Approx(-std::log(3.0)).epsilon(1e-12));
    const std::vector<double> slopes{2.0, 3.0, 6.0};
    for (double t : {-1.0, 0.0, 0.5, 2.0})
        CHECK(pressure(CircleMap::piecewise_linear(slopes), t, Scheme::ulam, 60) ==
              Approx(oracles::piecewise_linear_pressure(slopes, t)).epsilon(1e-12));
}

TEST_CASE("make_grid") {
    const auto g = make_grid(-1.0, 2.0, 0.25);
    REQUIRE(g.size() == 13);
    CHECK(g.front() == -1.0);
    CHECK(g.back() == Approx(2.0));
    CHECK(make_grid(0.0, 0.0, 0.1).size() == 1);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(make_grid(1.0, 0.0, 0.1), DomainError);
}

TEST_CASE("pressure curves of linear maps follow the closed forms") {
    const auto grid = make_grid(-1.0, 2.0, 0.25);
    SUBCASE("doubling map") {
        const auto c = pressure_curve(CircleMap::d_adic(2), grid, Scheme::collocation, 64);
        REQUIRE(c.size() == grid.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(c.failures[i].empty());
            CHECK(c.P[i] == Approx(oracles::d_adic_pressure(2, grid[i])).epsilon(1e-12));
            CHECK(c.chi[i] == Approx(std::log(2.0)).epsilon(1e-12));
            CHECK(c.entropy[i] == Approx(std::log(2.0)).epsilon(1e-12));
        }
        CHECK(c.convexity_violations() == 0);
        CHECK(c.monotonicity_violations() == 0);
    }
    SUBCASE("piecewise-linear map") {
        const std::vector<double> slopes{2.0, 3.0, 6.0};
        const auto c = pressure_curve(CircleMap::piecewise_linear(slopes), grid, Scheme::ulam, 60);
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(c.P[i] == Approx(oracles::piecewise_linear_pressure(slopes, grid[i])).epsilon(1e-12));
            // chi_t lies between the extreme slopes' exponents.
            CHECK(c.chi[i] >= std::log(2.0) - 1e-12);
            CHECK(c.chi[i] <= std::log(6.0) + 1e-12);
        }
        CHECK(c.convexity_violations() == 0);
        CHECK(c.monotonicity_violations() == 0);
    }
    CHECK_THROWS_AS(pressure_curve(CircleMap::d_adic(2), std::vector<double>{1.0, 0.0}, Scheme::ulam, 64), DomainError);
}

TEST_CASE("violation counters") {
    PressureCurve c;
    c.t_grid = {0.0, 1.0, 2.0, 3.0};
    c.P = {0.0, 1.0, 0.0, 1.0};
    c.chi = {0.5, 0.5, 0.5, 0.5};
    CHECK(c.convexity_violations() == 1);
    CHECK(c.monotonicity_violations() == 2);
    c.chi = {-0.5, -0.5, -0.5, -0.5};
    CHECK(c.monotonicity_violations() == 0);
}

TEST_CASE("the derivative of P is -chi") {
    const auto map = CircleMap::perturbed_expanding(2, 0.25);
    const double h = 1e-3;
    for (double t : {0.0, 0.5, 1.0, 1.5}) {
        const auto c = pressure_curve(map, std::vector<double>{t - h, t, t + h}, Scheme::collocation, 256);
        const double slope = (c.P[2] - c.P[0]) / (2.0 * h);
        CHECK(std::fabs(slope + c.chi[1]) <= 1e-3);
    }
}

TEST_CASE("neutral doubling pressure with the Ulam scheme at n = 4096") {
    const auto map = CircleMap::neutral_doubling();
    const auto c = pressure_curve(map, std::vector<double>{0.5, 1.0, 1.25, 1.5}, Scheme::ulam, 4096);
    // Beyond t = 1 the eigenfunction concentrates at the neutral point and
    // underflows elsewhere, so only P is asserted there.
    CHECK(c.failures[0].empty());
    CHECK(c.failures[1].empty());
    for (double p : c.P) CHECK(std::isfinite(p));
    CHECK(c.P[0] > 0.05);
    for (std::size_t i = 1; i < c.size(); ++i) {
        CAPTURE(c.t_grid[i]);
        CHECK(c.P[i] <= 2e-2);
        // The discrete operator loses O(1/n) mass in the neutral cell, so the
        // computed P sits a few 1e-6 below zero rather than on it.
        CHECK(c.P[i] >= -1e-5);
    }
}

TEST_CASE("find_t0 on expanding maps reports the Bowen root instead") {
    for (const auto& map : {CircleMap::piecewise_linear({2.0, 3.0, 6.0}), CircleMap::d_adic(2)}) {
        CAPTURE(map.describe());
        const auto r = find_t0(map, Scheme::ulam, 60, 1e-12);
        CHECK_FALSE(r.t0.has_value());
        CHECK(r.expanding);
        CHECK(r.classification == TransitionClass::expanding_no_transition);
        REQUIRE(r.bowen_root.has_value());
        CHECK(std::fabs(*r.bowen_root - 1.0) <= 1e-9);
    }
    CHECK(default_zero_threshold(CircleMap::piecewise_linear({2.0, 3.0, 6.0})) == 1e-6);
    CHECK(default_zero_threshold(CircleMap::neutral_doubling()) == 1e-3);
}

TEST_CASE("find_t0 on neutral doubling") {
    const auto r = find_t0(CircleMap::neutral_doubling(), Scheme::ulam, 512, 1e-3);
    REQUIRE(r.t0.has_value());
    CHECK(std::fabs(*r.t0 - 1.0) <= 5e-2);
    CHECK(*r.t0 <= 1.0 + 2e-2);
    CHECK(r.classification == TransitionClass::flat);
    CHECK(r.residual <= r.zero_threshold);
    REQUIRE(r.dynamical_dimension.has_value());
    CHECK(*r.dynamical_dimension == *r.t0);
}

TEST_CASE("an attracting fixed point produces a kink and no sign structure") {
    const auto map = attracting_doubling();
    CHECK_THROWS_AS(find_t0(map, Scheme::ulam, 256, 1e-3), NoSignStructure);
    const auto r = classify_transition(map, Scheme::ulam, 256, 6);
    CHECK(r.classification == TransitionClass::kink);
    CHECK_FALSE(r.t0.has_value());
    CHECK(r.chi_min == Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("classify_transition on the examples") {
    SUBCASE("tripling map") {
        const auto r = classify_transition(CircleMap::d_adic(3), Scheme::collocation, 64);
        CHECK(r.classification == TransitionClass::expanding_no_transition);
        CHECK(r.chi_min == Approx(std::log(3.0)));
        CHECK(r.chi_max == Approx(std::log(3.0)));
        CHECK_FALSE(r.t0.has_value());
    }
    SUBCASE("perturbed expanding map with period-12 orbits") {
        const auto r = classify_transition(CircleMap::perturbed_expanding(2, 0.25), Scheme::collocation, 128, 12);
        CHECK(r.classification == TransitionClass::expanding_no_transition);
        CHECK(r.chi_min > std::log(1.75) - 1e-12);
        CHECK(r.chi_max < std::log(2.25) + 1e-12);
        CHECK(r.chi_min <= r.chi_max);
        CHECK(r.max_period == 12);
    }
    SUBCASE("neutral doubling is flat") {
        const auto r = classify_transition(CircleMap::neutral_doubling(), Scheme::ulam, 512);
        CHECK(r.classification == TransitionClass::flat);
        CHECK(std::fabs(r.chi_min) <= 1e-12);
        REQUIRE(r.t0.has_value());
        CHECK(std::fabs(*r.t0 - 1.0) <= 5e-2);
    }
    CHECK(to_string(TransitionClass::flat) == "flat");
    CHECK(to_string(TransitionClass::kink) == "kink");
    CHECK(to_string(TransitionClass::expanding_no_transition) == "expanding_no_transition");
}

TEST_CASE("Lyapunov extrema") {
    const auto pl = lyapunov_extrema(CircleMap::piecewise_linear({2.0, 3.0, 6.0}), 4);
    CHECK(pl.chi_min == Approx(std::log(2.0)));
    CHECK(pl.chi_max == Approx(std::log(6.0)));
    CHECK(pl.max_period == 4);
    const auto d2 = lyapunov_extrema(CircleMap::d_adic(2), 10);
    CHECK(d2.chi_min == Approx(std::log(2.0)));
    CHECK(d2.chi_max == Approx(std::log(2.0)));
    CHECK(lyapunov_extrema(CircleMap::neutral_doubling(), 6).chi_min == 0.0);
    CHECK_THROWS_AS(lyapunov_extrema(CircleMap::d_adic(2), 0), DomainError);
    CHECK_THROWS_AS(lyapunov_extrema(CircleMap::d_adic(3), 16), BudgetError);
}

TEST_CASE("Rokhlin entropy") {
    for (double t : {0.0, 0.5, 1.0}) CHECK(entropy_rokhlin(CircleMap::d_adic(2), t, Scheme::collocation, 64) == Approx(std::log(2.0)));
    const std::vector<double> slopes{2.0, 3.0, 6.0};
    // At t = 0 the measure of maximal entropy gives each branch weight 1/3.
    CHECK(entropy_rokhlin(CircleMap::piecewise_linear(slopes), 0.0, Scheme::ulam, 60) == Approx(std::log(3.0)).epsilon(1e-10));
    // At t = 1 it is Lebesgue, whose entropy equals its Lyapunov exponent.
    CHECK(entropy_rokhlin(CircleMap::piecewise_linear(slopes), 1.0, Scheme::ulam, 60) ==
          Approx(oracles::piecewise_linear_lebesgue_lyapunov(slopes)).epsilon(1e-10));
}

TEST_CASE("variance") {
    const std::vector<double> slopes{2.0, 3.0, 6.0};
    const auto r = variance(CircleMap::piecewise_linear(slopes), 1.0, Scheme::ulam, 60);
    CHECK(r.sigma2_nagaev == Approx(oracles::piecewise_linear_variance(slopes, 1.0)).epsilon(1e-5));
    CHECK(r.sigma2_green_kubo == Approx(oracles::piecewise_linear_variance(slopes, 1.0)).epsilon(1e-8));
    const auto d2 = variance(CircleMap::d_adic(2), 0.5, Scheme::collocation, 64);
    CHECK(std::fabs(d2.sigma2_nagaev) <= 1e-8);
    CHECK(std::fabs(d2.sigma2_green_kubo) <= 1e-12);
    const auto nd = variance(CircleMap::neutral_doubling(), 0.3, Scheme::ulam, 2048);
    CHECK(nd.sigma2_nagaev > 0.0);
    CHECK(nd.sigma2_green_kubo > 0.0);
    CHECK_THROWS_AS(variance(CircleMap::d_adic(2), 0.5, Scheme::ulam, 64, 0.0), DomainError);
}

TEST_CASE("essential-radius bound") {
    const auto d2 = essential_bound_check(CircleMap::d_adic(2), 0.0);
    CHECK(d2.bound == Approx(0.5).epsilon(1e-10));
    CHECK(d2.within);
    const auto pl = essential_bound_check(CircleMap::piecewise_linear({2.0, 3.0, 6.0}), 0.0);
    CHECK(pl.bound == Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(pl.within);
    const auto half = essential_bound_check(CircleMap::d_adic(2), 0.5, 0.5);
    CHECK(half.bound == Approx(std::pow(2.0, -0.5)).epsilon(1e-10));
    CHECK(half.within);
    CHECK_THROWS_AS(essential_bound_check(CircleMap::d_adic(2), 0.0, 1.5), DomainError);
    CHECK_THROWS_AS(essential_bound_check(CircleMap::d_adic(2), 0.0, 0.0), DomainError);
}

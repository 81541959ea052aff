#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "circtherm/errors.hpp"
#include "circtherm/spectral.hpp"
#include "circtherm/transfer_op.hpp"

#include "../support/oracles.hpp"

using namespace circtherm;
using doctest::Approx;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

void check_normalisation(const SpectralData& sd) {
    double nh = 0.0, total = 0.0;
    for (std::size_t i = 0; i < sd.h.size(); ++i) {
        nh += sd.nu[i] * sd.h[i];
        total += sd.nu[i];
    }
    CHECK(std::fabs(nh - 1.0) <= 1e-10);
    CHECK(std::fabs(total - 1.0) <= 1e-12);
    CHECK(sd.lambda1 > 0.0);
    CHECK(sd.gap_ratio >= 0.0);
    CHECK(sd.gap_ratio <= 1.0 + 1e-9);
}

}  // namespace

TEST_CASE("spectral ordering breaks ties by real then imaginary part") {
    using C = std::complex<double>;
    CHECK(spectral_order(C(2, 0), C(1, 0)));
    CHECK(spectral_order(C(1, 0), C(-1, 0)));
    CHECK(spectral_order(C(0, -1), C(0, 1)));
    CHECK_FALSE(spectral_order(C(0, 1), C(0, -1)));
}

TEST_CASE("leading_spectrum on the examples") {
    const auto ulam2 = assemble_unchecked(CircleMap::d_adic(2), 0.0, Scheme::ulam, 2);
    const auto s1 = leading_spectrum(ulam2, 2);
    CHECK(std::abs(s1.values[0] - 2.0) <= 1e-14);
    CHECK(std::abs(s1.values[1]) <= 1e-14);

    const auto s2 = leading_spectrum(assemble_collocation(CircleMap::d_adic(2), 1.0, 64), 1);
    CHECK(std::abs(s2.values[0] - 1.0) <= 1e-12);

    const auto s3 = leading_spectrum(assemble_unchecked(CircleMap::piecewise_linear({2.0, 3.0, 6.0}), 0.0, Scheme::ulam, 6), 1);
    CHECK(std::abs(s3.values[0] - 3.0) <= 1e-12);

    CHECK_THROWS_AS(leading_spectrum(ulam2, 3), DomainError);
}

TEST_CASE("iterative and dense spectra agree") {
    const auto m = assemble(CircleMap::perturbed_expanding(2, 0.25), 0.5, Scheme::ulam, 200);
    const auto dense = leading_spectrum_dense(m.dense(), 3);
    const auto iter = leading_spectrum_iterative(m.entries, 3);
    CHECK(iter.converged);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(dense.values[static_cast<std::size_t>(i)] - iter.values[static_cast<std::size_t>(i)]) <= 1e-8);
    // The dominant eigenvector satisfies the eigen-equation.
    const Eigen::VectorXcd v = iter.vectors[0];
    const Eigen::VectorXcd av = m.entries.cast<std::complex<double>>() * v;
    CHECK((av - iter.values[0] * v).norm() <= 1e-8 * v.norm() * std::abs(iter.values[0]));
}

TEST_CASE("spectral_data on the examples") {
    SUBCASE("doubling map at t = 0.7, collocation") {
        const auto sd = spectral_data(CircleMap::d_adic(2), 0.7, Scheme::collocation, 64);
        CHECK(sd.lambda1 == Approx(std::pow(2.0, 0.3)).epsilon(1e-12));
        for (double h : sd.h) CHECK(h == Approx(1.0).epsilon(1e-10));
        for (double nu : sd.nu) CHECK(nu == Approx(1.0 / 64).epsilon(1e-10));
        check_normalisation(sd);
    }
    SUBCASE("piecewise-linear map at t = 1, Ulam") {
        const auto sd = spectral_data(CircleMap::piecewise_linear({2.0, 3.0, 6.0}), 1.0, Scheme::ulam, 60);
        CHECK(sd.lambda1 == Approx(1.0).epsilon(1e-12));
        for (double h : sd.h) CHECK(h == Approx(1.0).epsilon(1e-10));
        for (double nu : sd.nu) CHECK(nu == Approx(1.0 / 60).epsilon(1e-10));
        check_normalisation(sd);
    }
    SUBCASE("neutral doubling at t = 0, collocation") {
        const auto sd = spectral_data(CircleMap::neutral_doubling(), 0.0, Scheme::collocation, 128);
        CHECK(std::fabs(sd.lambda1 - 2.0) <= 1e-8);
        check_normalisation(sd);
    }
    SUBCASE("iterative path above the dense limit") {
        const auto sd = spectral_data(CircleMap::d_adic(2), 0.5, Scheme::ulam, 2048);
        CHECK(sd.converged);
        CHECK(sd.lambda1 == Approx(std::sqrt(2.0)).epsilon(1e-10));
        for (double h : sd.h) CHECK(h == Approx(1.0).epsilon(1e-8));
        CHECK(sd.gap_ratio < 1e-3);
        check_normalisation(sd);
    }
}

TEST_CASE("Perron property and peripheral uniqueness on expanding maps") {
    for (const auto& map : {CircleMap::d_adic(2), CircleMap::d_adic(3), CircleMap::perturbed_expanding(2, 0.25),
                            CircleMap::piecewise_linear({2.0, 3.0, 6.0})}) {
        for (double t : {-0.5, 0.0, 0.5, 1.0}) {
            for (auto scheme : {Scheme::ulam, Scheme::collocation}) {
                CAPTURE(map.describe());
                CAPTURE(t);
                const auto m = assemble(map, t, scheme, 120);
                const auto spec = leading_spectrum(m, 4);
                CHECK(std::fabs(spec.values[0].imag()) <= 1e-9 * std::abs(spec.values[0]));
                CHECK(spec.values[0].real() > 0.0);
                for (std::size_t k = 1; k < spec.values.size(); ++k)
                    CHECK(std::abs(spec.values[k]) < (1.0 - 1e-6) * spec.values[0].real());
                const auto sd = spectral_data(m);
                for (double h : sd.h) CHECK(h > 0.0);
                check_normalisation(sd);
            }
        }
    }
}

TEST_CASE("a rotation has no real leading eigenvalue") {
    OperatorMatrix m;
    m.n = 2;
    m.nodes = {0.25, 0.75};
    m.entries.resize(2, 2);
    m.entries.insert(0, 1) = -1.0;
    m.entries.insert(1, 0) = 1.0;
    CHECK_THROWS_AS(spectral_data(m), ComplexLeadingEigenvalue);
}

TEST_CASE("eigenmeasure is independent of the start vector") {
    const auto m = assemble(CircleMap::perturbed_expanding(2, 0.25), 0.5, Scheme::ulam, 256);
    std::vector<double> ones(256, 1.0), bumped(256);
    for (int i = 0; i < 256; ++i) bumped[static_cast<std::size_t>(i)] = 1.0 + std::cos(kTwoPi * m.nodes[static_cast<std::size_t>(i)]);
    const auto a = eigenmeasure_power_iteration(m, ones);
    const auto b = eigenmeasure_power_iteration(m, bumped);
    CHECK(total_variation(a, b) <= 1e-8);
    CHECK(total_variation(a, spectral_data(m).nu) <= 1e-8);
    CHECK(total_variation(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) == 1.0);
}

TEST_CASE("equilibrium states on the examples") {
    SUBCASE("doubling map: Lebesgue with Jacobian 2") {
        const auto map = CircleMap::d_adic(2);
        for (double t : {-1.0, 0.0, 0.5, 1.5}) {
            const auto eq = equilibrium_state(spectral_data(map, t, Scheme::collocation, 64), map);
            double total = 0.0;
            for (std::size_t i = 0; i < eq.mu.size(); ++i) {
                CHECK(eq.mu[i] == Approx(1.0 / 64).epsilon(1e-10));
                CHECK(eq.jacobian[i] == Approx(2.0).epsilon(1e-10));
                total += eq.mu[i];
            }
            CHECK(std::fabs(total - 1.0) <= 1e-12);
        }
    }
    SUBCASE("piecewise-linear map at t = 1: Jacobian s_i on branch i") {
        const std::vector<double> slopes{2.0, 3.0, 6.0};
        const auto map = CircleMap::piecewise_linear(slopes);
        const auto eq = equilibrium_state(spectral_data(map, 1.0, Scheme::ulam, 60), map);
        for (std::size_t i = 0; i < eq.mu.size(); ++i) {
            const double x = eq.nodes[i];
            const double s = x < 0.5 ? 2.0 : (x < 5.0 / 6.0 ? 3.0 : 6.0);
            CHECK(eq.jacobian[i] == Approx(s).epsilon(1e-10));
            CHECK(eq.mu[i] == Approx(1.0 / 60).epsilon(1e-10));
        }
    }
    SUBCASE("neutral doubling at t = 0: g-function identity") {
        const auto map = CircleMap::neutral_doubling();
        const auto sd = spectral_data(map, 0.0, Scheme::collocation, 128);
        const auto eq = equilibrium_state(sd, map);
        for (std::size_t i = 0; i < eq.jacobian.size(); ++i)
            CHECK(eq.jacobian[i] == Approx(2.0 * eigenfunction_at(sd, evaluate(map, eq.nodes[i])) / sd.h[i]).epsilon(1e-12));
        for (double x : {0.0, 0.1, 0.33, 0.5, 0.9}) CHECK(std::fabs(g_function_sum(sd, map, x) - 1.0) <= 5e-3);
    }
}

TEST_CASE("equilibrium measures are invariant") {
    for (const auto& map : {CircleMap::d_adic(2), CircleMap::perturbed_expanding(2, 0.25),
                            CircleMap::piecewise_linear({2.0, 3.0, 6.0})}) {
        for (double t : {0.0, 0.5, 1.0}) {
            CAPTURE(map.describe());
            CAPTURE(t);
            const auto eq = equilibrium_state(spectral_data(map, t, Scheme::collocation, 512), map);
            for (int which = 0; which < 2; ++which) {
                const auto g = [which](double x) { return which == 0 ? std::cos(kTwoPi * x) : std::sin(2.0 * kTwoPi * x); };
                double before = 0.0, after = 0.0;
                for (std::size_t i = 0; i < eq.mu.size(); ++i) {
                    before += eq.mu[i] * g(eq.nodes[i]);
                    after += eq.mu[i] * g(evaluate(map, eq.nodes[i]));
                }
                CHECK(std::fabs(after - before) <= 5e-3);
            }
            for (double m : eq.mu) CHECK(m >= 0.0);
            for (double j : eq.jacobian) CHECK(j > 0.0);
        }
    }
}

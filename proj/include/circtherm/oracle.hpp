#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "circtherm/map_zoo.hpp"

namespace circtherm {

inline constexpr long long kOrbitBudget = 10'000'000;
inline constexpr int kMaxPeriod = 20;

struct PeriodicOrbit {
    /// Fixed point of f^p on the circle.
    double point = 0.0;
    /// log |Df^p(point)| = sum of log|Df| along the orbit.
    double log_multiplier = 0.0;
    double multiplier() const;
};

/// Fixed points of f^p, one per circle point. The lift equation
/// F^p(y) = y + k is solved on [0,1] for every integer k in range, so a
/// degree-d full-branch map yields d^p solutions of which the ones at y = 0
/// and y = 1 coincide on the circle: count = d^p - 1.
struct PeriodicOrbitSet {
    int period = 0;
    std::vector<PeriodicOrbit> orbits;
    int count = 0;
    /// Solution at y = 1 duplicating the one at y = 0, with multipliers taken
    /// as left limits along the orbit. For maps whose derivative jumps at 0
    /// (piecewise-linear) this is the fixed point of the last branch.
    std::vector<PeriodicOrbit> boundary_copies;
};

/// Throws DomainError unless 1 <= period <= 20 and BudgetError when
/// degree^period > 1e7.
PeriodicOrbitSet enumerate_periodic_orbits(const CircleMap& map, int period);

/// d^p with overflow saturation.
long long itinerary_count(int degree, int period);

/// log sum_i s_i^{-t}; slopes must exceed 1 with reciprocals summing to 1.
double exact_pressure_piecewise_linear(std::span<const double> slopes, double t);

/// (1/p) log sum over fixed points x of f^p of |Df^p(x)|^{-t}.
double pressure_periodic_orbits(const CircleMap& map, double t, int period);

/// Amplitude of the uniform perturbation added after each step of a
/// Birkhoff orbit (2^-52, about one unit in the last place near 1).
inline constexpr double kBirkhoffJitter = 0x1p-52;

/// (1/n) sum_{j<n} observable(f^j(x0)), evaluated along a pseudo-orbit whose
/// steps carry a seeded perturbation of size kBirkhoffJitter.
double birkhoff_average(const CircleMap& map, const std::function<double(double)>& observable, double x0,
                        long n_iter);

/// Seed behind every pseudo-random Birkhoff start point in the test suite.
inline constexpr std::uint64_t kBirkhoffSeed = 20240521ULL;

/// `count` start points in (0,1) drawn from mt19937_64 seeded with kBirkhoffSeed.
std::vector<double> birkhoff_start_points(int count);

}  // namespace circtherm

#include "circtherm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "circtherm/errors.hpp"

namespace circtherm {

namespace {

// log sum exp(a_i)
double log_sum_exp(const std::vector<double>& a) {
    if (a.empty()) return -INFINITY;
    const double m = *std::max_element(a.begin(), a.end());
    double acc = 0.0;
    for (double v : a) acc += std::exp(v - m);
    return m + std::log(acc);
}

}  // namespace

double exact_pressure_piecewise_linear(std::span<const double> slopes, double t) {
    if (slopes.size() < 2) throw DomainError("exact_pressure_piecewise_linear", "need at least two slopes");
    double inv = 0.0;
    std::vector<double> terms;
    for (double s : slopes) {
        if (!(s > 1.0)) throw DomainError("exact_pressure_piecewise_linear", "slopes must exceed 1");
        inv += 1.0 / s;
        terms.push_back(-t * std::log(s));
    }
    if (std::fabs(inv - 1.0) > 1e-9)
        throw DomainError("exact_pressure_piecewise_linear", "reciprocal slopes must sum to 1");
    return log_sum_exp(terms);
}

double pressure_periodic_orbits(const CircleMap& map, double t, int period) {
    const auto set = enumerate_periodic_orbits(map, period);
    std::vector<double> terms;
    terms.reserve(set.orbits.size());
    for (const auto& o : set.orbits) terms.push_back(-t * o.log_multiplier);
    return log_sum_exp(terms) / period;
}

double birkhoff_average(const CircleMap& map, const std::function<double(double)>& observable, double x0,
                        long n_iter) {
    if (n_iter < 1) throw DomainError("birkhoff_average", "n_iter must be >= 1");
    // Every double is a dyadic rational, and dyadic points are eventually
    // periodic under maps such as x -> 2x or piecewise-linear maps with
    // integer slopes, so a bare floating-point orbit collapses onto a cycle.
    // A perturbation at the rounding level keeps supplying low-order digits;
    // the result is a pseudo-orbit that a true orbit of a nearby point shadows.
    std::mt19937_64 rng(kBirkhoffSeed);
    std::uniform_real_distribution<double> noise(-kBirkhoffJitter, kBirkhoffJitter);
    double x = wrap(x0);
    double acc = 0.0;
    for (long j = 0; j < n_iter; ++j) {
        acc += observable(x);
        x = wrap(evaluate(map, x) + noise(rng));
    }
    return acc / static_cast<double>(n_iter);
}

std::vector<double> birkhoff_start_points(int count) {
    std::mt19937_64 rng(kBirkhoffSeed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
        const double x = unif(rng);
        if (x > 0.0) out.push_back(x);
    }
    return out;
}

}  // namespace circtherm

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circtherm/errors.hpp"
#include "circtherm/oracle.hpp"

namespace circtherm {

namespace {

double iterate_lift(const CircleMap& map, double y, int p) {
    for (int j = 0; j < p; ++j) y = map.lift(y);
    return y;
}

double log_multiplier(const CircleMap& map, double y, int p, bool left_limits) {
    double acc = 0.0;
    for (int j = 0; j < p; ++j) {
        acc += std::log(left_limits ? map.derivative_left(y) : map.derivative(y));
        y = map.lift(y);
    }
    return acc;
}

// Root of H(y) - k on (lo, hi) where H(y) = F^p(y) - y changes sign; safeguarded Newton.
double refine_root(const CircleMap& map, int p, double k, double lo, double hi) {
    const auto g = [&](double y) { return iterate_lift(map, y, p) - y - k; };
    double glo = g(lo);
    double y = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double gy = g(y);
        if (gy == 0.0) return y;
        if ((gy < 0.0) == (glo < 0.0)) {
            lo = y;
            glo = gy;
        } else {
            hi = y;
        }
        if (!(hi - lo > 1e-16)) break;
        const double slope = std::exp(log_multiplier(map, y, p, false)) - 1.0;
        double next = y - gy / slope;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (std::fabs(next - y) <= 1e-17) break;
        y = next;
    }
    return y;
}

bool is_integer(double v) { return std::fabs(v - std::nearbyint(v)) <= 1e-12 * std::max(1.0, std::fabs(v)); }

}  // namespace

double PeriodicOrbit::multiplier() const { return std::exp(log_multiplier); }

long long itinerary_count(int degree, int period) {
    long long total = 1;
    for (int i = 0; i < period; ++i) {
        if (total > kOrbitBudget * 16) return total;  // saturate
        total *= degree;
    }
    return total;
}

PeriodicOrbitSet enumerate_periodic_orbits(const CircleMap& map, int period) {
    if (period < 1 || period > kMaxPeriod)
        throw DomainError("periodic_orbits", "period must lie in [1, 20]");
    const long long dp = itinerary_count(map.degree(), period);
    if (dp > kOrbitBudget) {
        std::ostringstream os;
        os << "degree^period = " << map.degree() << "^" << period << " exceeds the budget of " << kOrbitBudget;
        throw BudgetError("periodic_orbits", os.str());
    }

    const int p = period;
    const long long grid = std::max<long long>(1024, 4 * dp);
    const auto H = [&](double y) { return iterate_lift(map, y, p) - y; };

    PeriodicOrbitSet set;
    set.period = p;
    std::vector<double> roots;

    double prev_y = 0.0;
    double prev_h = H(0.0);
    const bool root_at_zero = is_integer(prev_h);
    if (root_at_zero) {
        prev_h = std::nearbyint(prev_h);
        roots.push_back(0.0);
    }
    for (long long j = 1; j <= grid; ++j) {
        const double y = static_cast<double>(j) / static_cast<double>(grid);
        double hy = H(y);
        const bool last = j == grid;
        if (last && root_at_zero) hy = std::nearbyint(hy);
        long long k_first, k_last;
        if (hy >= prev_h) {  // integers in (prev_h, hy]
            k_first = static_cast<long long>(std::floor(prev_h)) + 1;
            k_last = static_cast<long long>(std::floor(hy));
        } else {  // integers in [hy, prev_h)
            k_first = static_cast<long long>(std::ceil(hy));
            k_last = static_cast<long long>(std::ceil(prev_h)) - 1;
        }
        for (long long k = k_first; k <= k_last; ++k) {
            const double kd = static_cast<double>(k);
            if (last && std::fabs(kd - hy) <= 1e-9 * std::max(1.0, std::fabs(hy))) continue;  // y = 1 ~ y = 0
            if (kd == hy) {
                roots.push_back(y);
                continue;
            }
            roots.push_back(refine_root(map, p, kd, prev_y, y));
        }
        prev_y = y;
        prev_h = hy;
    }

    set.orbits.reserve(roots.size());
    for (double y : roots) {
        if (y >= 1.0) y = 0.0;
        set.orbits.push_back({y, log_multiplier(map, y, p, false)});
    }
    if (root_at_zero) set.boundary_copies.push_back({0.0, log_multiplier(map, 1.0, p, true)});
    set.count = static_cast<int>(set.orbits.size());
    return set;
}

}  // namespace circtherm

#include "circtherm/thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "circtherm/errors.hpp"
#include "circtherm/oracle.hpp"
#include "parallel.hpp"

namespace circtherm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kChiTolerance = 1e-3;

double lyapunov_of(const EquilibriumState& eq, const CircleMap& map) {
    double acc = 0.0;
    for (std::size_t i = 0; i < eq.mu.size(); ++i) acc += eq.mu[i] * std::log(map.derivative(eq.nodes[i]));
    return acc;
}

// Transversal zero of a decreasing P: regula falsi (Illinois) inside a
// bracket found by doubling the right end.
double bowen_root(const CircleMap& map, Scheme scheme, int n, double tol) {
    double lo = 0.0, hi = 2.0;
    double plo = pressure(map, lo, scheme, n);
    double phi = pressure(map, hi, scheme, n);
    for (int i = 0; phi > 0.0 && i < 8; ++i) {
        lo = hi;
        plo = phi;
        hi *= 2.0;
        phi = pressure(map, hi, scheme, n);
    }
    if (!(plo > 0.0) || phi > 0.0) throw NoSignStructure("find_t0", "pressure has no sign change on [0, 512]");
    int side = 0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        mid = (lo * phi - hi * plo) / (phi - plo);
        if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        const double pm = pressure(map, mid, scheme, n);
        if (pm == 0.0) return mid;
        if (pm > 0.0) {
            lo = mid;
            plo = pm;
            if (side == 1) phi *= 0.5;
            side = 1;
        } else {
            hi = mid;
            phi = pm;
            if (side == -1) plo *= 0.5;
            side = -1;
        }
        if (std::fabs(pm) <= 1e-15) return mid;
    }
    return mid;
}

}  // namespace

double pressure(const CircleMap& map, double t, Scheme scheme, int n) {
    return std::log(leading_eigenvalue(assemble(map, t, scheme, n)));
}

int PressureCurve::convexity_violations(double tolerance) const {
    int count = 0;
    for (std::size_t i = 1; i + 1 < P.size(); ++i) {
        const double d2 = P[i + 1] - 2.0 * P[i] + P[i - 1];
        if (std::isfinite(d2) && d2 < -tolerance) ++count;
    }
    return count;
}

int PressureCurve::monotonicity_violations(double tolerance) const {
    int count = 0;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
        if (!(chi[i] >= -kChiTolerance)) continue;
        if (P[i + 1] - P[i] > tolerance) ++count;
    }
    return count;
}

PressureCurve pressure_curve(const CircleMap& map, std::span<const double> t_grid, Scheme scheme, int n) {
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("pressure_curve", "t_grid must be sorted ascending");
    PressureCurve curve;
    curve.scheme = scheme;
    curve.n = n;
    curve.t_grid.assign(t_grid.begin(), t_grid.end());
    const std::size_t m = t_grid.size();
    curve.P.assign(m, kNaN);
    curve.chi.assign(m, kNaN);
    curve.entropy.assign(m, kNaN);
    curve.gap_ratio.assign(m, kNaN);
    curve.failures.assign(m, std::string{});
    parallel_for(m, [&](std::size_t i) {
        const double t = t_grid[i];
        try {
            const auto sd = spectral_data(map, t, scheme, n);
            curve.P[i] = std::log(sd.lambda1);
            curve.gap_ratio[i] = sd.gap_ratio;
            const auto eq = equilibrium_state(sd, map);
            curve.chi[i] = lyapunov_of(eq, map);
            curve.entropy[i] = curve.P[i] + t * curve.chi[i];
        } catch (const std::exception& e) {
            curve.failures[i] = e.what();
        }
    });
    return curve;
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) throw DomainError("make_grid", "need step > 0 and stop >= start");
    std::vector<double> grid;
    const long count = static_cast<long>(std::floor((stop - start) / step + 1e-6));
    for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
    return grid;
}

std::string to_string(TransitionClass c) {
    switch (c) {
        case TransitionClass::expanding_no_transition: return "expanding_no_transition";
        case TransitionClass::flat: return "flat";
        case TransitionClass::kink: return "kink";
    }
    return "unknown";
}

LyapunovExtrema lyapunov_extrema(const CircleMap& map, int max_period) {
    if (max_period < 1 || max_period > kMaxPeriod)
        throw DomainError("lyapunov_extrema", "max_period must lie in [1, 20]");
    if (itinerary_count(map.degree(), max_period) > kOrbitBudget)
        throw BudgetError("lyapunov_extrema", "degree^max_period exceeds the budget of 1e7");
    LyapunovExtrema ex;
    ex.max_period = max_period;
    ex.chi_min = INFINITY;
    ex.chi_max = -INFINITY;
    for (int p = 1; p <= max_period; ++p) {
        const auto set = enumerate_periodic_orbits(map, p);
        auto visit = [&](const PeriodicOrbit& o) {
            const double chi = o.log_multiplier / p;
            ex.chi_min = std::min(ex.chi_min, chi);
            ex.chi_max = std::max(ex.chi_max, chi);
            ++ex.orbits_examined;
        };
        for (const auto& o : set.orbits) visit(o);
        for (const auto& o : set.boundary_copies) visit(o);
    }
    return ex;
}

double default_zero_threshold(const CircleMap& map) {
    return map.family() == MapFamily::piecewise_linear ? 1e-6 : 1e-3;
}

namespace {

TransitionReport leftmost_zero(const CircleMap& map, Scheme scheme, int n, double tol, double threshold) {
    TransitionReport rep;
    rep.zero_threshold = threshold;
    double lo = 0.0, hi = 2.0;
    const double p_hi = pressure(map, hi, scheme, n);
    if (p_hi > threshold) {
        std::ostringstream os;
        os << "P(2) = " << p_hi << " exceeds the zero threshold " << threshold;
        throw NoSignStructure("find_t0", os.str());
    }
    if (!(pressure(map, lo, scheme, n) > threshold))
        throw NoSignStructure("find_t0", "P(0) is already at or below the zero threshold");
    // Invariant: P(lo) > threshold >= P(hi). The right end is reported, so
    // the returned point is one where P has been verified to vanish.
    double p_at_hi = p_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double p_mid = pressure(map, mid, scheme, n);
        if (p_mid > threshold) {
            lo = mid;
        } else {
            hi = mid;
            p_at_hi = p_mid;
        }
    }
    rep.t0 = hi;
    rep.dynamical_dimension = hi;
    rep.residual = std::fabs(p_at_hi);
    return rep;
}

}  // namespace

TransitionReport find_t0(const CircleMap& map, Scheme scheme, int n, double tol,
                         std::optional<double> zero_threshold) {
    if (!(tol > 0.0)) throw DomainError("find_t0", "tol must be positive");
    const auto diag = diagnose(map);
    const double threshold = zero_threshold.value_or(default_zero_threshold(map));
    if (diag.is_expanding) {
        TransitionReport rep;
        rep.classification = TransitionClass::expanding_no_transition;
        rep.expanding = true;
        rep.zero_threshold = threshold;
        rep.residual = kNaN;
        rep.bowen_root = bowen_root(map, scheme, n, tol);
        return rep;
    }
    auto rep = leftmost_zero(map, scheme, n, tol, threshold);
    rep.classification = TransitionClass::flat;
    return rep;
}

TransitionReport classify_transition(const CircleMap& map, Scheme scheme, int n, int max_period, double tol) {
    const auto diag = diagnose(map);
    const auto ex = lyapunov_extrema(map, max_period);
    TransitionReport rep;
    if (diag.is_expanding && ex.chi_min > kChiTolerance) {
        rep = find_t0(map, scheme, n, tol);
        rep.classification = TransitionClass::expanding_no_transition;
    } else if (ex.chi_min < -kChiTolerance) {
        // A periodic sink: P stays above the line -t chi_min > 0, so there is
        // no zero to report.
        rep.classification = TransitionClass::kink;
        rep.residual = kNaN;
        rep.zero_threshold = default_zero_threshold(map);
    } else {
        rep = leftmost_zero(map, scheme, n, tol, default_zero_threshold(map));
        rep.classification = TransitionClass::flat;
    }
    rep.expanding = diag.is_expanding;
    rep.chi_min = ex.chi_min;
    rep.chi_max = ex.chi_max;
    rep.max_period = max_period;
    return rep;
}

double entropy_rokhlin(const CircleMap& map, double t, Scheme scheme, int n) {
    const auto sd = spectral_data(map, t, scheme, n);
    const auto eq = equilibrium_state(sd, map);
    double acc = 0.0;
    for (std::size_t i = 0; i < eq.mu.size(); ++i) acc += eq.mu[i] * std::log(eq.jacobian[i]);
    return acc;
}

VarianceReport variance(const CircleMap& map, double s, Scheme scheme, int n, double delta, int n_corr) {
    if (!(delta > 0.0)) throw DomainError("variance", "delta must be positive");
    if (n_corr < 0) throw DomainError("variance", "n_corr must be non-negative");
    const auto m = assemble(map, s, scheme, n);
    const auto sd = spectral_data(m);
    const double p0 = std::log(sd.lambda1);
    const double pp = pressure(map, s + delta, scheme, n);
    const double pm = pressure(map, s - delta, scheme, n);

    VarianceReport rep;
    rep.s = s;
    rep.sigma2_nagaev = (pp - 2.0 * p0 + pm) / (delta * delta);

    const std::size_t size = sd.h.size();
    Eigen::VectorXd mu(size), psi(size), nu(size), w(size);
    double chi = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        mu[static_cast<Eigen::Index>(i)] = sd.h[i] * sd.nu[i];
        nu[static_cast<Eigen::Index>(i)] = sd.nu[i];
    }
    mu /= mu.sum();
    for (std::size_t i = 0; i < size; ++i) {
        const double l = std::log(map.derivative(sd.nodes[i]));
        psi[static_cast<Eigen::Index>(i)] = -l;
        chi += mu[static_cast<Eigen::Index>(i)] * l;
    }
    psi.array() += chi;
    const double mean = mu.dot(psi);
    double gk = mu.dot(psi.cwiseProduct(psi)) - mean * mean;
    // Cov(psi, psi o f^k) = <nu, psi * Lnorm^k(psi h)> - mean^2
    for (std::size_t i = 0; i < size; ++i)
        w[static_cast<Eigen::Index>(i)] = psi[static_cast<Eigen::Index>(i)] * sd.h[i];
    for (int k = 1; k <= n_corr; ++k) {
        w = (m.entries * w) / sd.lambda1;
        gk += 2.0 * (nu.dot(psi.cwiseProduct(w)) - mean * mean);
    }
    rep.sigma2_green_kubo = gk;
    rep.agreement = std::fabs(rep.sigma2_nagaev - rep.sigma2_green_kubo);
    return rep;
}

EssentialBoundReport essential_bound_check(const CircleMap& map, double t, double alpha, Scheme scheme, int n) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("essential_bound_check", "alpha must lie in (0, 1]");
    const auto sd = spectral_data(map, t, scheme, n);
    EssentialBoundReport rep;
    rep.t = t;
    rep.alpha = alpha;
    rep.observed_ratio = sd.gap_ratio;
    rep.bound = std::exp(pressure(map, t + alpha, scheme, n) - std::log(sd.lambda1));
    rep.within = rep.observed_ratio <= rep.bound + kEssentialSlack;
    return rep;
}

}  // namespace circtherm

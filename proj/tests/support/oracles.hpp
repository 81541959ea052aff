#pragma once

// Brute-force reference calculators for the test suites. Everything here is
// written from closed forms or analytic inverse branches and deliberately
// avoids the library's assembly, branch solver and eigen-solvers, so that
// agreement with the pipeline is evidence rather than self-consistency.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace oracles {

using Matrix = std::vector<std::vector<double>>;

/// log sum_i s_i^{-t}.
inline double piecewise_linear_pressure(const std::vector<double>& slopes, double t) {
    double acc = 0.0;
    for (double s : slopes) acc += std::pow(s, -t);
    return std::log(acc);
}

/// (1 - t) log d: constants are eigenfunctions with eigenvalue d * d^{-t}.
inline double d_adic_pressure(int d, double t) { return (1.0 - t) * std::log(static_cast<double>(d)); }

/// Fixed points of x -> d^p x mod 1 are k / (d^p - 1), each with multiplier
/// d^p, hence (1/p) log((d^p - 1) d^{-p t}).
inline double d_adic_orbit_pressure(int d, int p, double t) {
    const double dp = std::pow(static_cast<double>(d), p);
    return (std::log(dp - 1.0) - p * t * std::log(static_cast<double>(d))) / p;
}

inline std::vector<double> d_adic_periodic_points(int d, int p) {
    const long m = static_cast<long>(std::llround(std::pow(static_cast<double>(d), p))) - 1;
    std::vector<double> pts;
    for (long k = 0; k < m; ++k) pts.push_back(static_cast<double>(k) / static_cast<double>(m));
    return pts;
}

/// Variance of log s_i when branch i carries weight s_i^{-s} / sum_j s_j^{-s};
/// this is P''(s) for the full-branch piecewise-linear map.
inline double piecewise_linear_variance(const std::vector<double>& slopes, double s) {
    double z = 0.0, m1 = 0.0, m2 = 0.0;
    for (double v : slopes) {
        const double w = std::pow(v, -s);
        z += w;
        m1 += w * std::log(v);
        m2 += w * std::log(v) * std::log(v);
    }
    m1 /= z;
    m2 /= z;
    return m2 - m1 * m1;
}

/// Lyapunov exponent (= entropy) of Lebesgue measure: sum_i (1/s_i) log s_i.
inline double piecewise_linear_lebesgue_lyapunov(const std::vector<double>& slopes) {
    double acc = 0.0;
    for (double s : slopes) acc += std::log(s) / s;
    return acc;
}

/// Analytic inverse branches of the piecewise-linear map with the given slopes:
/// branch i covers [a_i, a_i + 1/s_i) and y = a_i + x / s_i.
inline std::vector<std::pair<double, double>> piecewise_linear_preimages(const std::vector<double>& slopes, double x) {
    std::vector<std::pair<double, double>> out;
    double a = 0.0;
    for (double s : slopes) {
        out.emplace_back(a + x / s, s);
        a += 1.0 / s;
    }
    return out;
}

/// Weighted-Ulam matrix for the piecewise-linear map, built from analytic branches.
inline Matrix piecewise_linear_ulam(const std::vector<double>& slopes, double t, int n) {
    Matrix m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        for (auto [y, s] : piecewise_linear_preimages(slopes, x)) {
            const int j = std::min(n - 1, static_cast<int>(std::floor(y * n)));
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += std::pow(s, -t);
        }
    }
    return m;
}

/// Weighted-Ulam matrix for x -> d x mod 1 (preimages (x + k) / d).
inline Matrix d_adic_ulam(int d, double t, int n) {
    Matrix m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        for (int k = 0; k < d; ++k) {
            const double y = (x + k) / d;
            const int j = std::min(n - 1, static_cast<int>(std::floor(y * n)));
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += std::pow(static_cast<double>(d), -t);
        }
    }
    return m;
}

/// Dominant eigenvalue of a nonnegative irreducible matrix by plain power
/// iteration with Collatz-Wielandt bracketing; stops when the bracket
/// max_i (Mv)_i / v_i - min_i (Mv)_i / v_i drops below tol.
inline double perron_root(const Matrix& m, double tol = 1e-13, int max_iterations = 200000) {
    const std::size_t n = m.size();
    std::vector<double> v(n, 1.0), w(n);
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) w[i] = std::inner_product(m[i].begin(), m[i].end(), v.begin(), 0.0);
        lo = INFINITY;
        hi = -INFINITY;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = w[i] / v[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        if (hi - lo <= tol * hi) break;
        const double norm = *std::max_element(w.begin(), w.end());
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    return 0.5 * (lo + hi);
}

/// Lift of x -> 2x - sin(2 pi x) / (2 pi) and its derivative.
inline double neutral_doubling_lift(double x) { return 2.0 * x - std::sin(2.0 * std::numbers::pi * x) / (2.0 * std::numbers::pi); }
inline double neutral_doubling_derivative(double x) { return 2.0 - std::cos(2.0 * std::numbers::pi * x); }

/// Lift of x -> d x + (eps / 2 pi) sin(2 pi x) and its derivative.
inline double perturbed_lift(int d, double eps, double x) {
    return d * x + eps / (2.0 * std::numbers::pi) * std::sin(2.0 * std::numbers::pi * x);
}
inline double perturbed_derivative(int d, double eps, double x) {
    return d + eps * std::cos(2.0 * std::numbers::pi * x);
}

/// Fixed points of the p-th iterate of a circle map given by a lift F, found by
/// pure bisection on every integer level crossing of F^p(y) - y over a fine
/// uniform grid of [0, 1). Returns log|Df^p| at each point.
template <class Lift, class Deriv>
std::vector<double> periodic_log_multipliers(Lift lift, Deriv deriv, int p, int grid) {
    const auto H = [&](double y) {
        double z = y;
        for (int j = 0; j < p; ++j) z = lift(z);
        return z - y;
    };
    std::vector<double> out;
    const auto record = [&](double y) {
        double acc = 0.0, z = y;
        for (int j = 0; j < p; ++j) {
            acc += std::log(deriv(z));
            z = lift(z);
        }
        out.push_back(acc);
    };
    for (int g = 0; g < grid; ++g) {
        const double a = static_cast<double>(g) / grid, b = static_cast<double>(g + 1) / grid;
        const double ha = H(a), hb = H(b);
        // integer levels k with ha <= k < hb (half-open so y = 1 is not counted twice)
        for (double k = std::ceil(ha); k < hb; k += 1.0) {
            double lo = a, hi = b;
            if (H(lo) - k == 0.0) {
                record(lo);
                continue;
            }
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (H(mid) - k < 0.0) lo = mid; else hi = mid;
            }
            record(0.5 * (lo + hi));
        }
    }
    return out;
}

/// (1/p) log sum exp(-t * log-multiplier).
inline double orbit_pressure(const std::vector<double>& log_multipliers, int p, double t) {
    double m = -INFINITY;
    for (double l : log_multipliers) m = std::max(m, -t * l);
    double acc = 0.0;
    for (double l : log_multipliers) acc += std::exp(-t * l - m);
    return (m + std::log(acc)) / p;
}

}  // namespace oracles

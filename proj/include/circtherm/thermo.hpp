#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circtherm/map_zoo.hpp"
#include "circtherm/spectral.hpp"
#include "circtherm/transfer_op.hpp"

namespace circtherm {

/// P(t) = log lambda1 of the discretised L_{f, -t log|Df|}.
double pressure(const CircleMap& map, double t, Scheme scheme, int n);

struct PressureCurve {
    std::vector<double> t_grid;
    std::vector<double> P;
    /// Lyapunov exponent of the discrete equilibrium state, sum mu_i log|Df(x_i)|.
    std::vector<double> chi;
    /// P(t) + t chi_t.
    std::vector<double> entropy;
    std::vector<double> gap_ratio;
    /// Empty where the point succeeded; otherwise the error message. Failed
    /// quantities are NaN.
    std::vector<std::string> failures;
    Scheme scheme = Scheme::ulam;
    int n = 0;

    std::size_t size() const { return t_grid.size(); }
    /// Interior points whose second difference of P falls below -tolerance.
    int convexity_violations(double tolerance = 1e-4) const;
    /// Steps where P increases by more than `tolerance` while chi_t >= -1e-3.
    int monotonicity_violations(double tolerance = 1e-12) const;
};

/// Points are independent and evaluated in parallel; results land in grid
/// order. A point that throws is recorded in `failures`.
PressureCurve pressure_curve(const CircleMap& map, std::span<const double> t_grid, Scheme scheme, int n);

/// start, start + step, ..., up to stop (inclusive within step/1e6).
std::vector<double> make_grid(double start, double stop, double step);

enum class TransitionClass { expanding_no_transition, flat, kink };
std::string to_string(TransitionClass c);

struct LyapunovExtrema {
    double chi_min = 0.0;
    double chi_max = 0.0;
    int max_period = 0;
    long orbits_examined = 0;
};

/// Min and max of (1/p) log|Df^p| over all periodic points of period
/// p <= max_period. Boundary copies with left-limit multipliers are included.
LyapunovExtrema lyapunov_extrema(const CircleMap& map, int max_period);

struct TransitionReport {
    std::optional<double> t0;
    TransitionClass classification = TransitionClass::expanding_no_transition;
    double chi_min = 0.0;
    double chi_max = 0.0;
    std::optional<double> dynamical_dimension;
    /// |P(t0)| at the reported root (NaN when t0 is absent).
    double residual = 0.0;
    /// Zero of P for expanding maps, reported instead of t0.
    std::optional<double> bowen_root;
    bool expanding = false;
    /// Threshold below which P counts as zero in the leftmost-zero search.
    double zero_threshold = 0.0;
    int max_period = 0;
};

/// Threshold used by find_t0: 1e-6 for piecewise-linear maps, 1e-3 otherwise.
double default_zero_threshold(const CircleMap& map);

/// Expanding maps (diagnose) return expanding_no_transition with t0 unset and
/// the transversal zero of P in `bowen_root`. Otherwise bisection on [0, 2]
/// for the leftmost t with P(t) <= zero_threshold, down to width `tol`.
/// Throws NoSignStructure if P(2) is still above the threshold.
/// chi_min/chi_max are left at zero; classify_transition fills them.
TransitionReport find_t0(const CircleMap& map, Scheme scheme, int n, double tol,
                         std::optional<double> zero_threshold = std::nullopt);

/// expanding_no_transition when the map is expanding and chi_min > 1e-3,
/// kink when chi_min < -1e-3, flat otherwise.
TransitionReport classify_transition(const CircleMap& map, Scheme scheme, int n, int max_period = 8,
                                     double tol = 1e-3);

/// Rokhlin's formula on the discrete equilibrium state: sum mu_i log J_i.
double entropy_rokhlin(const CircleMap& map, double t, Scheme scheme, int n);

struct VarianceReport {
    double s = 0.0;
    double sigma2_nagaev = 0.0;
    double sigma2_green_kubo = 0.0;
    double agreement = 0.0;
};

/// Asymptotic variance of psi = -log|Df| + chi_s under the equilibrium state
/// at s, two ways: second central difference of P, and Var(psi) plus twice the
/// first n_corr autocovariances computed with the normalised operator.
VarianceReport variance(const CircleMap& map, double s, Scheme scheme, int n, double delta = 1e-3,
                        int n_corr = 64);

struct EssentialBoundReport {
    double t = 0.0;
    double alpha = 1.0;
    double observed_ratio = 0.0;
    double bound = 0.0;
    bool within = false;
};

inline constexpr double kEssentialSlack = 5e-2;

/// observed_ratio = gap_ratio(t), bound = exp(P(t + alpha) - P(t));
/// `within` when observed_ratio <= bound + 5e-2.
EssentialBoundReport essential_bound_check(const CircleMap& map, double t, double alpha = 1.0,
                                           Scheme scheme = Scheme::collocation, int n = 256);

}  // namespace circtherm

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace circtherm {

/// Circle points live in [0,1); the metric wraps around.
double wrap(double x);
double circle_distance(double x, double y);

enum class MapFamily {
    d_adic,
    perturbed_expanding,
    neutral_doubling,
    piecewise_linear,
    manneville_pomeau_circle,
    custom,
};

std::string to_string(MapFamily family);

/// Parameters of the built-in families. Unused fields stay at their defaults.
struct MapParams {
    int d = 2;
    double eps = 0.0;
    double alpha = 0.0;
    std::vector<double> slopes;
};

/// A degree-d orientation-preserving local diffeomorphism of the circle,
/// described by a strictly increasing lift F with F(x+1) = F(x) + d and by
/// |Df|. Values are immutable and cheap to copy; the closures are shared.
class CircleMap {
public:
    using LiftFn = std::function<double(double)>;
    using DerivativeFn = std::function<double(double)>;

    /// x -> d x mod 1.
    static CircleMap d_adic(int d);
    /// x -> d x + (eps / 2 pi) sin(2 pi x) mod 1, so |Df| = d + eps cos(2 pi x).
    static CircleMap perturbed_expanding(int d, double eps);
    /// x -> 2x - (1 / 2 pi) sin(2 pi x) mod 1: smooth, degree 2, neutral fixed point at 0.
    static CircleMap neutral_doubling();
    /// Full-branch Markov map with branch i of length 1/s_i and slope s_i.
    static CircleMap piecewise_linear(std::vector<double> slopes);
    /// Manneville-Pomeau map x(1 + (2x)^alpha) on [0,1/2], 2x - 1 on (1/2,1],
    /// with |Df| blended linearly over windows of width 1e-2 at the gluing
    /// points 1/2 and 0 so the circle map is C^1.
    static CircleMap manneville_pomeau_circle(double alpha);
    /// User-supplied map. `lift` must be defined on [0,1]; it is extended by
    /// F(x + k) = F(x) + k d. `derivative_left` defaults to `derivative`.
    /// Runs validate() before returning.
    static CircleMap custom(std::string name, int degree, LiftFn lift, DerivativeFn derivative,
                            bool smooth = true, DerivativeFn derivative_left = {});

    MapFamily family() const noexcept { return family_; }
    const MapParams& params() const noexcept { return params_; }
    int degree() const noexcept { return degree_; }
    /// False for families that are only piecewise smooth (piecewise_linear and
    /// the C^1 Manneville-Pomeau circle map); selects the collocation kernel.
    bool is_smooth() const noexcept { return smooth_; }
    const std::string& name() const noexcept { return name_; }

    /// Lift F evaluated at any real x.
    double lift(double x) const;
    /// |Df(x)| for x in [0,1) (x is wrapped first).
    double derivative(double x) const;
    /// Left limit of |Df| at x in (0,1]; x = 1 means the limit from below at 0.
    double derivative_left(double x) const;

    /// Branch endpoints b_0 = 0 < b_1 < ... < b_d = 1 with F(b_i) = F(0) + i.
    const std::vector<double>& branch_points() const noexcept { return *branch_points_; }

    std::string describe() const;

private:
    CircleMap() = default;
    void finish();

    MapFamily family_ = MapFamily::custom;
    MapParams params_;
    int degree_ = 1;
    bool smooth_ = true;
    std::string name_;
    LiftFn base_lift_;  // on [0,1]
    DerivativeFn derivative_;
    DerivativeFn derivative_left_;
    std::shared_ptr<const std::vector<double>> branch_points_;
};

struct MapDiagnostics {
    double min_derivative = 0.0;
    bool is_expanding = false;
    std::vector<double> neutral_points;
    int degree = 0;
    /// log deg(f), the topological entropy of a circle local diffeomorphism.
    double topological_entropy = 0.0;
    /// Set for maps that are only piecewise smooth.
    bool reduced_smoothness = false;
};

inline constexpr double kNeutralTolerance = 1e-6;

/// F(x) mod 1.
double evaluate(const CircleMap& map, double x);
/// |Df(x)|.
double derivative(const CircleMap& map, double x);
/// The `degree` preimages of x in increasing order, obtained from the lift by
/// bracketing plus safeguarded Newton. Throws SolverFailure if a residual
/// stays above 1e-10.
std::vector<double> inverse_branches(const CircleMap& map, double x);
/// Same, writing into a caller-owned buffer (resized to degree).
void inverse_branches(const CircleMap& map, double x, std::vector<double>& out);
/// Grid minimum of |Df| refined by golden-section search; neutral points are
/// local minima with |Df| <= 1 + 1e-6. Throws InvalidMap if min |Df| <= 0.
MapDiagnostics diagnose(const CircleMap& map);
/// Checks positivity of |Df| and monotonicity of the lift on a 4096-point
/// grid, the degree shift F(x+1) - F(x) at 16 pseudo-random points, and the
/// branch count. Throws InvalidMap on the first violation.
void validate(const CircleMap& map);

}  // namespace circtherm

#include "circtherm/map_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "circtherm/errors.hpp"

namespace circtherm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kGridPoints = 4096;
constexpr double kBranchResidual = 1e-10;

// Solves base(y) = target on [lo, hi] for an increasing base by bisection.
double bisect_increasing(const CircleMap::LiftFn& f, double target, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Golden-section minimisation of g on [a, b].
double golden_section(const std::function<double(double)>& g, double a, double b) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double gc = g(c), gd = g(d);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        if (gc <= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double wrap(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;
    return r;
}

double circle_distance(double x, double y) {
    const double d = std::fabs(wrap(x) - wrap(y));
    return std::min(d, 1.0 - d);
}

std::string to_string(MapFamily family) {
    switch (family) {
        case MapFamily::d_adic: return "d_adic";
        case MapFamily::perturbed_expanding: return "perturbed_expanding";
        case MapFamily::neutral_doubling: return "neutral_doubling";
        case MapFamily::piecewise_linear: return "piecewise_linear";
        case MapFamily::manneville_pomeau_circle: return "manneville_pomeau_circle";
        case MapFamily::custom: return "custom";
    }
    return "unknown";
}

CircleMap CircleMap::d_adic(int d) {
    if (d < 2) throw DomainError("d_adic", "degree must be >= 2");
    CircleMap m;
    m.family_ = MapFamily::d_adic;
    m.params_.d = d;
    m.degree_ = d;
    m.name_ = "d_adic(" + std::to_string(d) + ")";
    const double dd = d;
    m.base_lift_ = [dd](double x) { return dd * x; };
    m.derivative_ = [dd](double) { return dd; };
    m.finish();
    return m;
}

CircleMap CircleMap::perturbed_expanding(int d, double eps) {
    if (d < 2) throw DomainError("perturbed_expanding", "degree must be >= 2");
    if (!(std::fabs(eps) < d))
        throw DomainError("perturbed_expanding", "|eps| must be < d for a local diffeomorphism");
    CircleMap m;
    m.family_ = MapFamily::perturbed_expanding;
    m.params_.d = d;
    m.params_.eps = eps;
    m.degree_ = d;
    std::ostringstream os;
    os << "perturbed_expanding(" << d << ", " << eps << ")";
    m.name_ = os.str();
    const double dd = d;
    m.base_lift_ = [dd, eps](double x) { return dd * x + eps / kTwoPi * std::sin(kTwoPi * x); };
    m.derivative_ = [dd, eps](double x) { return dd + eps * std::cos(kTwoPi * x); };
    m.finish();
    return m;
}

CircleMap CircleMap::neutral_doubling() {
    CircleMap m;
    m.family_ = MapFamily::neutral_doubling;
    m.params_.d = 2;
    m.params_.eps = -1.0;
    m.degree_ = 2;
    m.name_ = "neutral_doubling";
    m.base_lift_ = [](double x) { return 2.0 * x - std::sin(kTwoPi * x) / kTwoPi; };
    m.derivative_ = [](double x) { return 2.0 - std::cos(kTwoPi * x); };
    m.finish();
    return m;
}

CircleMap CircleMap::piecewise_linear(std::vector<double> slopes) {
    if (slopes.size() < 2) throw DomainError("piecewise_linear", "need at least two slopes");
    double inv_sum = 0.0;
    for (double s : slopes) {
        if (!(s > 1.0) || !std::isfinite(s))
            throw DomainError("piecewise_linear", "every slope must be a finite real > 1");
        inv_sum += 1.0 / s;
    }
    if (std::fabs(inv_sum - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "reciprocal slopes must sum to 1, got " << inv_sum;
        throw DomainError("piecewise_linear", os.str());
    }
    const std::size_t k = slopes.size();
    // Branch i covers [a_i, a_{i+1}) with length 1/s_i; the last branch
    // absorbs the rounding so that its endpoint is exactly 1.
    auto starts = std::make_shared<std::vector<double>>(k + 1, 0.0);
    auto lengths = std::make_shared<std::vector<double>>(k, 0.0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        (*lengths)[i] = 1.0 / slopes[i];
        (*starts)[i + 1] = (*starts)[i] + (*lengths)[i];
    }
    (*starts)[k] = 1.0;
    (*lengths)[k - 1] = 1.0 - (*starts)[k - 1];

    CircleMap m;
    m.family_ = MapFamily::piecewise_linear;
    m.params_.d = static_cast<int>(k);
    m.params_.slopes = slopes;
    m.degree_ = static_cast<int>(k);
    m.smooth_ = false;
    std::ostringstream os;
    os << "piecewise_linear(";
    for (std::size_t i = 0; i < k; ++i) os << (i ? ", " : "") << slopes[i];
    os << ")";
    m.name_ = os.str();

    // Index of the branch whose half-open domain [a_i, a_{i+1}) contains x.
    auto branch_of = [starts, k](double x) {
        auto it = std::upper_bound(starts->begin() + 1, starts->begin() + static_cast<long>(k), x);
        return static_cast<std::size_t>(it - (starts->begin() + 1));
    };
    m.base_lift_ = [starts, lengths, branch_of, k](double x) {
        if (x >= 1.0) return static_cast<double>(k) + (x - 1.0) / (*lengths)[k - 1];
        const std::size_t i = branch_of(x);
        return static_cast<double>(i) + (x - (*starts)[i]) / (*lengths)[i];
    };
    auto sl = std::make_shared<std::vector<double>>(slopes);
    m.derivative_ = [sl, branch_of](double x) { return (*sl)[branch_of(x)]; };
    // Branch whose domain (a_i, a_{i+1}] contains x.
    m.derivative_left_ = [sl, starts, k](double x) {
        auto it = std::lower_bound(starts->begin() + 1, starts->begin() + static_cast<long>(k), x);
        return (*sl)[static_cast<std::size_t>(it - (starts->begin() + 1))];
    };
    m.branch_points_ = starts;
    m.finish();
    return m;
}

CircleMap CircleMap::manneville_pomeau_circle(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw DomainError("manneville_pomeau_circle", "alpha must be > 0");
    constexpr double w = 1e-2;
    const double a = 0.5 - 0.5 * w;
    const double b = 0.5 + 0.5 * w;
    const double c2a = std::pow(2.0, alpha);
    auto raw_lift = [alpha, c2a](double x) { return x + c2a * std::pow(x, alpha + 1.0); };
    auto raw_deriv = [alpha, c2a](double x) { return 1.0 + (alpha + 1.0) * c2a * std::pow(x, alpha); };
    const double fa = raw_lift(a);
    const double da = raw_deriv(a);
    // Slope of the right branch chosen so that F(1) - F(0) = 2 exactly.
    const double c = (2.0 - fa - 0.5 * w * da - 0.5 * w) / (1.0 - b);
    if (!(c > 0.0)) throw DomainError("manneville_pomeau_circle", "alpha too large for the smoothing window");
    const double fb = fa + 0.5 * w * (da + c);
    const double e = 1.0 - w;
    const double fe = fb + c * (e - b);

    CircleMap m;
    m.family_ = MapFamily::manneville_pomeau_circle;
    m.params_.d = 2;
    m.params_.alpha = alpha;
    m.degree_ = 2;
    m.smooth_ = false;
    std::ostringstream os;
    os << "manneville_pomeau_circle(" << alpha << ")";
    m.name_ = os.str();
    m.base_lift_ = [=](double x) {
        if (x <= a) return raw_lift(x);
        if (x <= b) {
            const double u = x - a;
            return fa + da * u + (c - da) * u * u / (2.0 * w);
        }
        if (x <= e) return fb + c * (x - b);
        const double u = x - e;
        return fe + c * u + (1.0 - c) * u * u / (2.0 * w);
    };
    m.derivative_ = [=](double x) {
        if (x <= a) return raw_deriv(x);
        if (x <= b) return da + (c - da) * (x - a) / w;
        if (x <= e) return c;
        return c + (1.0 - c) * (x - e) / w;
    };
    // The circle derivative is continuous, so its left limit at 0 is D(1) = 1.
    m.derivative_left_ = [=](double x) {
        if (x <= a) return raw_deriv(x);
        if (x <= b) return da + (c - da) * (x - a) / w;
        if (x <= e) return c;
        return c + (1.0 - c) * (x - e) / w;
    };
    m.finish();
    return m;
}

CircleMap CircleMap::custom(std::string name, int degree, LiftFn lift, DerivativeFn derivative,
                            bool smooth, DerivativeFn derivative_left) {
    if (degree < 1) throw DomainError("custom", "degree must be >= 1");
    if (!lift || !derivative) throw DomainError("custom", "lift and derivative are required");
    CircleMap m;
    m.family_ = MapFamily::custom;
    m.params_.d = degree;
    m.degree_ = degree;
    m.smooth_ = smooth;
    m.name_ = std::move(name);
    m.base_lift_ = std::move(lift);
    m.derivative_ = std::move(derivative);
    m.derivative_left_ = std::move(derivative_left);
    const double span = m.base_lift_(1.0) - m.base_lift_(0.0);
    if (std::fabs(span - degree) > 1e-9)
        throw InvalidMap("custom", "lift must satisfy F(1) - F(0) = degree");
    m.finish();
    validate(m);
    return m;
}

void CircleMap::finish() {
    if (!derivative_left_) {
        auto d = derivative_;
        derivative_left_ = [d](double x) { return d(x >= 1.0 ? 0.0 : x); };
    }
    if (!branch_points_) {
        auto pts = std::make_shared<std::vector<double>>(static_cast<std::size_t>(degree_) + 1, 0.0);
        const double f0 = base_lift_(0.0);
        for (int i = 1; i < degree_; ++i)
            (*pts)[static_cast<std::size_t>(i)] = bisect_increasing(base_lift_, f0 + i, 0.0, 1.0);
        (*pts)[static_cast<std::size_t>(degree_)] = 1.0;
        branch_points_ = pts;
    }
}

double CircleMap::lift(double x) const {
    const double k = std::floor(x);
    double r = x - k;
    if (r >= 1.0) r = 0.0;
    return base_lift_(r) + degree_ * k;
}

double CircleMap::derivative(double x) const { return derivative_(wrap(x)); }

double CircleMap::derivative_left(double x) const {
    double r = x - std::floor(x);
    if (r <= 0.0) r = 1.0;
    return derivative_left_(r);
}

std::string CircleMap::describe() const { return name_; }

double evaluate(const CircleMap& map, double x) { return wrap(map.lift(wrap(x))); }

double derivative(const CircleMap& map, double x) { return map.derivative(x); }

void inverse_branches(const CircleMap& map, double x, std::vector<double>& out) {
    const int d = map.degree();
    const auto& bp = map.branch_points();
    const double f0 = map.lift(0.0);
    const double base = f0 + wrap(wrap(x) - f0);
    out.resize(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double target = base + k;
        double lo = bp[static_cast<std::size_t>(k)];
        double hi = bp[static_cast<std::size_t>(k) + 1];
        // Safeguarded Newton: fall back to bisection whenever the Newton step
        // leaves the bracket.
        double y = 0.5 * (lo + hi);
        double fy = map.lift(y) - target;
        const double scale = std::max(1.0, std::fabs(target));
        for (int it = 0; it < 200; ++it) {
            if (std::fabs(fy) <= 1e-13 * scale) break;
            if (fy < 0.0)
                lo = y;
            else
                hi = y;
            if (!(hi - lo > 0.0)) break;
            const double dfy = map.derivative(y);
            double next = y - fy / dfy;
            if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
            if (next == y) break;
            y = next;
            fy = map.lift(y) - target;
        }
        if (std::fabs(fy) > kBranchResidual) {
            std::ostringstream os;
            os << "branch " << k << " of " << map.name() << " at x=" << x << " has residual " << fy;
            throw SolverFailure("inverse_branches", os.str());
        }
        out[static_cast<std::size_t>(k)] = wrap(y);
    }
    std::sort(out.begin(), out.end());
}

std::vector<double> inverse_branches(const CircleMap& map, double x) {
    std::vector<double> out;
    inverse_branches(map, x, out);
    return out;
}

MapDiagnostics diagnose(const CircleMap& map) {
    MapDiagnostics diag;
    diag.degree = map.degree();
    diag.topological_entropy = std::log(static_cast<double>(map.degree()));
    diag.reduced_smoothness = !map.is_smooth();

    constexpr int n = kGridPoints;
    const double h = 1.0 / n;
    std::vector<double> vals(n);
    for (int j = 0; j < n; ++j) vals[static_cast<std::size_t>(j)] = map.derivative(j * h);
    const auto at = [&](int j) { return vals[static_cast<std::size_t>((j % n + n) % n)]; };

    const int jmin = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    const auto g = [&map](double x) { return map.derivative(wrap(x)); };

    double best = at(jmin);
    std::vector<double> neutral;
    for (int j = 0; j < n; ++j) {
        const double v = at(j);
        const bool local_min = v <= at(j - 1) && v <= at(j + 1);
        if (!(j == jmin || (local_min && v <= 1.0 + 1e-2))) continue;
        const double x = golden_section(g, (j - 1) * h, (j + 1) * h);
        // Keep the grid value when refinement does not improve on it.
        double xr = x, vr = g(x);
        if (v <= vr) {
            xr = j * h;
            vr = v;
        }
        best = std::min(best, vr);
        if (vr <= 1.0 + kNeutralTolerance) {
            double p = wrap(xr);
            if (1.0 - p < 1e-9) p = 0.0;
            const bool dup = std::any_of(neutral.begin(), neutral.end(),
                                         [p](double q) { return circle_distance(p, q) < 1e-6; });
            if (!dup) neutral.push_back(p);
        }
    }
    if (!(best > 0.0))
        throw InvalidMap("diagnose", map.name() + " has min |Df| <= 0 (not a local diffeomorphism)");
    std::sort(neutral.begin(), neutral.end());
    diag.min_derivative = best;
    diag.is_expanding = best > 1.0 + kNeutralTolerance;
    diag.neutral_points = diag.is_expanding ? std::vector<double>{} : neutral;
    return diag;
}

void validate(const CircleMap& map) {
    constexpr int n = kGridPoints;
    const double h = 1.0 / n;
    for (int j = 0; j < n; ++j) {
        const double x = j * h;
        const double df = map.derivative(x);
        if (!(df > 0.0) || !std::isfinite(df)) {
            std::ostringstream os;
            os << "|Df| = " << df << " at x=" << x;
            throw InvalidMap("validate", os.str());
        }
        if (!(map.lift(x + h) > map.lift(x))) {
            std::ostringstream os;
            os << "lift not increasing at x=" << x;
            throw InvalidMap("validate", os.str());
        }
    }
    std::mt19937_64 rng(0x5eed'c1c1eULL);
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    for (int i = 0; i < 16; ++i) {
        const double x = unif(rng);
        const double shift = map.lift(x + 1.0) - map.lift(x);
        if (std::fabs(shift - map.degree()) > 1e-12 * std::max(1.0, std::fabs(map.lift(x)))) {
            std::ostringstream os;
            os << "F(x+1) - F(x) = " << shift << " at x=" << x << ", expected " << map.degree();
            throw InvalidMap("validate", os.str());
        }
    }
    for (int i = 0; i < 16; ++i) {
        const auto ys = inverse_branches(map, (i + 0.5) / 16.0);
        if (static_cast<int>(ys.size()) != map.degree())
            throw InvalidMap("validate", "branch count differs from degree");
    }
}

}  // namespace circtherm

#include "circtherm/transfer_op.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "circtherm/errors.hpp"
#include "parallel.hpp"

namespace circtherm {

namespace {

// Periodic cardinal function of the even-n trigonometric interpolant,
// sin(pi n s) / (n tan(pi s)), returning exact 0/1 on the node lattice.
// Both arguments are reduced before the trig calls so that points a few ulps
// from a node keep full relative accuracy.
double trig_cardinal(double s, int n) {
    s -= std::nearbyint(s);
    const double u = s * n;
    const double r = std::nearbyint(u);
    const double f = u - r;
    if (std::fabs(f) < 1e-12) {
        const long k = static_cast<long>(r);
        return (k % n == 0) ? 1.0 : 0.0;
    }
    const double sign = (static_cast<long>(r) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::sin(std::numbers::pi * f) / (n * std::tan(std::numbers::pi * s));
}

using Triplet = Eigen::Triplet<double>;

SparseRowMatrix from_rows(int n, const std::vector<std::vector<Triplet>>& rows) {
    std::vector<Triplet> all;
    std::size_t total = 0;
    for (const auto& r : rows) total += r.size();
    all.reserve(total);
    for (const auto& r : rows) all.insert(all.end(), r.begin(), r.end());
    SparseRowMatrix m(n, n);
    m.setFromTriplets(all.begin(), all.end());
    m.makeCompressed();
    return m;
}

OperatorMatrix collocation_impl(const CircleMap& map, double t, int n) {
    OperatorMatrix m;
    m.scheme = Scheme::collocation;
    m.kernel = map.is_smooth() ? Kernel::trigonometric : Kernel::hat;
    m.n = n;
    m.t = t;
    m.nodes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m.nodes[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;

    const GeometricPotential pot{t};
    std::vector<std::vector<Triplet>> rows(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        std::vector<double> ys;
        inverse_branches(map, m.nodes[i], ys);
        std::vector<double> row(static_cast<std::size_t>(n), 0.0);
        for (double y : ys) {
            const double w = pot.weight(map.derivative(y));
            if (m.kernel == Kernel::trigonometric) {
                // sin(pi n (y - j/n)) = (-1)^j sin(pi n y)
                // sin(pi n y) = (-1)^r sin(pi n (y - r/n)) with r the nearest node.
                const long r = std::lround(y * n);
                const double f = n * (y - static_cast<double>(r) / n);
                if (std::fabs(f) < 1e-12) {
                    row[static_cast<std::size_t>((r % n + n) % n)] += w;
                    continue;
                }
                const double s0 = (r % 2 == 0 ? 1.0 : -1.0) * std::sin(std::numbers::pi * f);
                for (int j = 0; j < n; ++j) {
                    const double num = (j % 2 == 0) ? s0 : -s0;
                    double s = y - static_cast<double>(j) / n;
                    s -= std::nearbyint(s);
                    row[static_cast<std::size_t>(j)] += w * num / (n * std::tan(std::numbers::pi * s));
                }
            } else {
                const double u = y * n;
                const long j0 = static_cast<long>(std::floor(u));
                const double frac = u - static_cast<double>(j0);
                const auto idx = [n](long j) { return static_cast<std::size_t>((j % n + n) % n); };
                row[idx(j0)] += w * (1.0 - frac);
                row[idx(j0 + 1)] += w * frac;
            }
        }
        auto& out = rows[i];
        for (int j = 0; j < n; ++j)
            if (row[static_cast<std::size_t>(j)] != 0.0)
                out.emplace_back(static_cast<int>(i), j, row[static_cast<std::size_t>(j)]);
    });
    m.entries = from_rows(n, rows);
    return m;
}

OperatorMatrix ulam_impl(const CircleMap& map, double t, int n) {
    OperatorMatrix m;
    m.scheme = Scheme::ulam;
    m.kernel = Kernel::indicator;
    m.n = n;
    m.t = t;
    m.nodes.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m.nodes[static_cast<std::size_t>(i)] = (i + 0.5) / n;

    const GeometricPotential pot{t};
    std::vector<std::vector<Triplet>> rows(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        std::vector<double> ys;
        inverse_branches(map, m.nodes[i], ys);
        for (double y : ys) {
            const int j = std::min(n - 1, static_cast<int>(std::floor(y * n)));
            rows[i].emplace_back(static_cast<int>(i), j, pot.weight(map.derivative(y)));
        }
    });
    m.entries = from_rows(n, rows);
    return m;
}

}  // namespace

std::string to_string(Scheme scheme) { return scheme == Scheme::ulam ? "ulam" : "collocation"; }

std::string to_string(Kernel kernel) {
    switch (kernel) {
        case Kernel::indicator: return "indicator";
        case Kernel::trigonometric: return "trigonometric";
        case Kernel::hat: return "hat";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& text) {
    if (text == "ulam") return Scheme::ulam;
    if (text == "collocation") return Scheme::collocation;
    throw DomainError("scheme", "unknown scheme '" + text + "' (expected ulam or collocation)");
}

std::complex<double> apply_pointwise(const CircleMap& map, double t,
                                     const std::function<std::complex<double>(double)>& g, double x) {
    const GeometricPotential pot{t};
    std::complex<double> acc = 0.0;
    for (double y : inverse_branches(map, x)) acc += pot.weight(map.derivative(y)) * g(y);
    return acc;
}

OperatorMatrix assemble_collocation(const CircleMap& map, double t, int n) {
    if (n < 8) throw DimensionError("assemble_collocation", "n must be >= 8");
    if (n % 2 != 0) throw DimensionError("assemble_collocation", "n must be even");
    return collocation_impl(map, t, n);
}

OperatorMatrix assemble_ulam(const CircleMap& map, double t, int n) {
    if (n < 8) throw DimensionError("assemble_ulam", "n must be >= 8");
    return ulam_impl(map, t, n);
}

OperatorMatrix assemble(const CircleMap& map, double t, Scheme scheme, int n) {
    return scheme == Scheme::ulam ? assemble_ulam(map, t, n) : assemble_collocation(map, t, n);
}

OperatorMatrix assemble_unchecked(const CircleMap& map, double t, Scheme scheme, int n) {
    if (n < 1) throw DimensionError("assemble", "n must be positive");
    return scheme == Scheme::ulam ? ulam_impl(map, t, n) : collocation_impl(map, t, n);
}

double interpolate(Kernel kernel, std::span<const double> samples, double x) {
    const int n = static_cast<int>(samples.size());
    x = wrap(x);
    switch (kernel) {
        case Kernel::indicator: {
            const int j = std::min(n - 1, static_cast<int>(std::floor(x * n)));
            return samples[static_cast<std::size_t>(j)];
        }
        case Kernel::hat: {
            const double u = x * n;
            const long j0 = static_cast<long>(std::floor(u));
            const double frac = u - static_cast<double>(j0);
            return (1.0 - frac) * samples[static_cast<std::size_t>(j0 % n)] +
                   frac * samples[static_cast<std::size_t>((j0 + 1) % n)];
        }
        case Kernel::trigonometric: {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += samples[static_cast<std::size_t>(j)] * trig_cardinal(x - static_cast<double>(j) / n, n);
            return acc;
        }
    }
    return 0.0;
}

std::vector<double> sample(const OperatorMatrix& m, const std::function<double(double)>& g) {
    std::vector<double> out(m.nodes.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = g(m.nodes[i]);
    return out;
}

void write_csv(const OperatorMatrix& m, std::ostream& os) {
    os << "i,j,value\n";
    const auto old = os.precision(17);
    for (int i = 0; i < m.entries.outerSize(); ++i)
        for (SparseRowMatrix::InnerIterator it(m.entries, i); it; ++it)
            os << it.row() << ',' << it.col() << ',' << it.value() << '\n';
    os.precision(old);
}

}  // namespace circtherm

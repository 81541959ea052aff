#include "circtherm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "circtherm/errors.hpp"
#include "fp_env.hpp"
#include "lapack.hpp"

namespace circtherm {

namespace {

using Vec = Eigen::VectorXd;

double inf_norm(const Vec& v) { return v.cwiseAbs().maxCoeff(); }

void sort_spectrum(std::vector<std::complex<double>>& values, Eigen::MatrixXcd* vectors) {
    std::vector<std::size_t> order(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return spectral_order(values[a], values[b]); });
    std::vector<std::complex<double>> sorted(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];
    if (vectors && vectors->cols() > 0) {
        Eigen::MatrixXcd v(vectors->rows(), vectors->cols());
        for (std::size_t i = 0; i < order.size(); ++i)
            v.col(static_cast<Eigen::Index>(i)) = vectors->col(static_cast<Eigen::Index>(order[i]));
        *vectors = std::move(v);
    }
    values = std::move(sorted);
}

// Rescales so the mean is positive real.
void fix_phase(Eigen::VectorXcd& v) {
    const std::complex<double> mean = v.mean();
    if (std::abs(mean) > 1e-300) {
        v *= std::abs(mean) / mean;
    } else {
        Eigen::Index i;
        v.cwiseAbs().maxCoeff(&i);
        v *= std::abs(v(i)) / v(i);
    }
    const double nrm = v.norm();
    if (nrm > 0.0) v /= nrm;
}

struct PowerResult {
    Vec v;
    double lambda = 0.0;
    bool converged = false;
    long iterations = 0;
};

// v <- A v / sum(A v). Converged when |A v - lambda v|_inf <= tol |lambda| |v|_inf.
PowerResult power_iterate(const SparseRowMatrix& a, Vec v, long max_iterations, double tolerance) {
    PowerResult r;
    double s = v.sum();
    v /= (s != 0.0 ? s : v.norm());
    Vec w(v.size());
    for (long k = 1; k <= max_iterations; ++k) {
        w.noalias() = a * v;
        const double sw = w.sum();
        r.lambda = sw / v.sum();
        r.iterations = k;
        const double resid = inf_norm(w - r.lambda * v);
        if (resid <= tolerance * std::fabs(r.lambda) * inf_norm(v)) {
            r.converged = true;
            v = w / sw;
            break;
        }
        if (sw == 0.0) {
            r.lambda = 0.0;
            r.converged = true;
            break;
        }
        v = w / sw;
    }
    r.v = std::move(v);
    return r;
}

// Deterministic start vectors: all-ones, then cos/sin Fourier modes.
Vec start_vector(Eigen::Index n, int which) {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n);
        const int mode = (which + 1) / 2;
        if (which == 0)
            v(i) = 1.0;
        else if (which % 2 == 1)
            v(i) = std::cos(2.0 * std::numbers::pi * mode * x);
        else
            v(i) = std::sin(2.0 * std::numbers::pi * mode * x);
    }
    return v;
}

// Modulus of the dominant eigenvalue of A - lambda1 h nu^T / (nu . h),
// estimated from the growth of |B^k x| over doubling windows.
double subdominant_modulus(const SparseRowMatrix& a, double lambda1, const Vec& h, const Vec& nu,
                           long max_iterations, double tolerance, bool& converged) {
    const Eigen::Index n = h.size();
    const double nh = nu.dot(h);
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        x(i) = 1.0 + std::cos(2.0 * std::numbers::pi * s) + 0.5 * std::sin(6.0 * std::numbers::pi * s) +
               0.25 * std::cos(10.0 * std::numbers::pi * s + 0.3);
    }
    x -= h * (nu.dot(x) / nh);
    double xn = x.norm();
    converged = false;
    if (xn == 0.0) {
        converged = true;
        return 0.0;
    }
    x /= xn;
    std::vector<double> log_growth{0.0};  // cumulative log |B^k x0|
    long checkpoint = 32;
    double previous = -1.0, estimate = 0.0;
    for (long k = 1; k <= max_iterations; ++k) {
        Vec y = a * x;
        y -= h * (lambda1 * nu.dot(x) / nh);
        const double yn = y.norm();
        if (yn == 0.0 || !std::isfinite(yn)) {
            converged = yn == 0.0;
            return 0.0;
        }
        log_growth.push_back(log_growth.back() + std::log(yn));
        x = y / yn;
        if (k == checkpoint || k == max_iterations) {
            const long half = k / 2;
            estimate = std::exp((log_growth[static_cast<std::size_t>(k)] -
                                 log_growth[static_cast<std::size_t>(half)]) /
                                static_cast<double>(k - half));
            if (previous >= 0.0 && std::fabs(estimate - previous) <= tolerance * std::max(estimate, 1e-300)) {
                converged = true;
                return estimate;
            }
            previous = estimate;
            checkpoint *= 2;
        }
    }
    return estimate;
}

void check_leading(std::complex<double> lam) {
    if (!(lam.real() > 0.0) || std::fabs(lam.imag()) > 1e-9 * std::abs(lam)) {
        std::ostringstream os;
        os << "leading eigenvalue " << lam.real() << (lam.imag() < 0 ? " - " : " + ") << std::fabs(lam.imag())
           << "i is not real positive";
        throw ComplexLeadingEigenvalue("spectral_data", os.str());
    }
}

// Inverse iteration with shift just above the Perron root.
std::pair<Vec, Vec> perron_vectors_dense(const Eigen::MatrixXd& a, double lambda1) {
    const Eigen::Index n = a.rows();
    double shift = lambda1 * 1e-10 + 1e-300;
    for (int attempt = 0; attempt < 6; ++attempt, shift *= 100.0) {
        lapack::LU lu(a - (lambda1 + shift) * Eigen::MatrixXd::Identity(n, n));
        if (lu.singular()) continue;
        Vec v = Vec::Ones(n), u = Vec::Ones(n);
        for (int it = 0; it < 60; ++it) {
            v = lu.solve(v);
            v /= v.norm();
            u = lu.solve_transposed(u);
            u /= u.norm();
            const double rv = inf_norm(a * v - lambda1 * v) / (lambda1 * inf_norm(v));
            const double ru = inf_norm(a.transpose() * u - lambda1 * u) / (lambda1 * inf_norm(u));
            if (rv <= 1e-11 && ru <= 1e-11 && it >= 1) break;
        }
        if (v.allFinite() && u.allFinite()) return {v, u};
    }
    throw SolverFailure("spectral_data", "inverse iteration for the Perron vectors failed");
}

SpectralData finish(const OperatorMatrix& m, double lambda1, double lambda2_mod, Vec h, Vec nu) {
    if (h.sum() < 0.0) h = -h;
    if (nu.sum() < 0.0) nu = -nu;
    nu /= nu.sum();
    h /= nu.dot(h);

    SpectralData sd;
    sd.lambda1 = lambda1;
    sd.lambda2_mod = lambda2_mod;
    sd.gap_ratio = lambda2_mod / lambda1;
    sd.h.assign(h.data(), h.data() + h.size());
    sd.nu.assign(nu.data(), nu.data() + nu.size());
    sd.nodes = m.nodes;
    sd.scheme = m.scheme;
    sd.kernel = m.kernel;
    sd.n = m.n;
    sd.t = m.t;
    return sd;
}

}  // namespace

bool spectral_order(std::complex<double> a, std::complex<double> b) {
    const double ma = std::abs(a), mb = std::abs(b);
    const double scale = std::max({ma, mb, 1e-300});
    if (std::fabs(ma - mb) > 1e-12 * scale) return ma > mb;
    if (std::fabs(a.real() - b.real()) > 1e-12 * scale) return a.real() > b.real();
    return a.imag() < b.imag();
}

LeadingSpectrum leading_spectrum_dense(const Eigen::MatrixXd& a, int k, bool with_vectors) {
    if (k < 1 || k > a.rows()) throw DomainError("leading_spectrum", "k must satisfy 1 <= k <= n");
    auto es = lapack::eig(a, with_vectors);
    sort_spectrum(es.values, with_vectors ? &es.vectors : nullptr);
    LeadingSpectrum out;
    out.method = "dense";
    out.values.assign(es.values.begin(), es.values.begin() + k);
    if (with_vectors) {
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXcd v = es.vectors.col(i);
            fix_phase(v);
            out.vectors.push_back(std::move(v));
        }
    }
    return out;
}

LeadingSpectrum leading_spectrum_iterative(const SparseRowMatrix& a, int k, long max_iterations,
                                           double tolerance) {
    const FlushDenormals ftz;
    const Eigen::Index n = a.rows();
    if (k < 1 || k > n) throw DomainError("leading_spectrum", "k must satisfy 1 <= k <= n");
    const Eigen::Index p = std::min<Eigen::Index>(n, k + 4);
    Eigen::MatrixXd q(n, p);
    for (Eigen::Index c = 0; c < p; ++c) q.col(c) = start_vector(n, static_cast<int>(c));
    q = Eigen::HouseholderQR<Eigen::MatrixXd>(q).householderQ() * Eigen::MatrixXd::Identity(n, p);

    LeadingSpectrum out;
    out.method = "subspace";
    out.converged = false;
    Eigen::MatrixXd z(n, p);
    for (long it = 1; it <= max_iterations; ++it) {
        z.noalias() = a * q;
        const bool check = it % 10 == 0 || it == max_iterations;
        if (check) {
            // Rayleigh-Ritz on span(q).
            Eigen::MatrixXd hsmall = q.transpose() * z;
            auto es = lapack::eig(hsmall, true);
            sort_spectrum(es.values, &es.vectors);
            Eigen::MatrixXcd ritz = q.cast<std::complex<double>>() * es.vectors;
            Eigen::MatrixXcd image = z.cast<std::complex<double>>() * es.vectors;
            bool ok = true;
            for (int i = 0; i < k; ++i) {
                const auto lam = es.values[static_cast<std::size_t>(i)];
                const double res = (image.col(i) - lam * ritz.col(i)).norm();
                if (res > tolerance * std::max(std::abs(lam), 1e-300) * ritz.col(i).norm()) ok = false;
            }
            out.iterations = it;
            if (ok || it == max_iterations) {
                out.converged = ok;
                out.values.assign(es.values.begin(), es.values.begin() + k);
                out.vectors.clear();
                for (int i = 0; i < k; ++i) {
                    Eigen::VectorXcd v = ritz.col(i);
                    fix_phase(v);
                    out.vectors.push_back(std::move(v));
                }
                return out;
            }
        }
        q = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ() * Eigen::MatrixXd::Identity(n, p);
    }
    return out;
}

LeadingSpectrum leading_spectrum(const OperatorMatrix& m, int k) {
    if (m.n <= kDenseLimit) return leading_spectrum_dense(m.dense(), k);
    return leading_spectrum_iterative(m.entries, k);
}

double leading_eigenvalue(const OperatorMatrix& m, bool* converged) {
    if (m.n <= kDenseLimit) {
        const auto spec = leading_spectrum_dense(m.dense(), 1, false);
        check_leading(spec.values.front());
        if (converged) *converged = true;
        return spec.values.front().real();
    }
    const FlushDenormals ftz;
    const auto r = power_iterate(m.entries, Vec::Ones(m.n), kMaxPowerIterations, kPowerTolerance);
    if (converged) *converged = r.converged;
    if (!(r.lambda > 0.0)) check_leading(r.lambda);
    return r.lambda;
}

SpectralData spectral_data(const OperatorMatrix& m) {
    if (m.n <= kDenseLimit) {
        const Eigen::MatrixXd a = m.dense();
        const auto spec = leading_spectrum_dense(a, std::min(2, m.n), false);
        const auto lam = spec.values.front();
        check_leading(lam);
        const double lambda2 = spec.values.size() > 1 ? std::abs(spec.values[1]) : 0.0;
        auto [h, nu] = perron_vectors_dense(a, lam.real());
        return finish(m, lam.real(), lambda2, std::move(h), std::move(nu));
    }

    const FlushDenormals ftz;
    const SparseRowMatrix at = m.entries.transpose();
    const auto right = power_iterate(m.entries, Vec::Ones(m.n), kMaxPowerIterations, kPowerTolerance);
    const auto left = power_iterate(at, Vec::Ones(m.n), kMaxPowerIterations, kPowerTolerance);
    double lambda1 = right.lambda;
    const bool converged = right.converged && left.converged;
    if (!converged) {
        // Two-sided quotient; its error is second order in the vector errors.
        const Vec av = m.entries * right.v;
        lambda1 = left.v.dot(av) / left.v.dot(right.v);
    }
    check_leading(lambda1);
    bool sub_converged = false;
    const double lambda2 =
        subdominant_modulus(m.entries, lambda1, right.v, left.v, kMaxPowerIterations, 1e-8, sub_converged);
    auto sd = finish(m, lambda1, std::min(lambda2, lambda1), right.v, left.v);
    sd.converged = converged;
    sd.iterations = std::max(right.iterations, left.iterations);
    return sd;
}

SpectralData spectral_data(const CircleMap& map, double t, Scheme scheme, int n) {
    return spectral_data(assemble(map, t, scheme, n));
}

std::vector<double> eigenmeasure_power_iteration(const OperatorMatrix& m, std::span<const double> start,
                                                 double tolerance, long max_iterations) {
    if (static_cast<int>(start.size()) != m.n)
        throw DimensionError("eigenmeasure_power_iteration", "start vector has the wrong length");
    const FlushDenormals ftz;
    const SparseRowMatrix at = m.entries.transpose();
    Vec v = Eigen::Map<const Vec>(start.data(), m.n);
    v /= v.sum();
    Vec w(m.n);
    for (long k = 0; k < max_iterations; ++k) {
        w.noalias() = at * v;
        w /= w.sum();
        const double tv = 0.5 * (w - v).cwiseAbs().sum();
        v.swap(w);
        if (tv <= tolerance) break;
    }
    return {v.data(), v.data() + v.size()};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::fabs(p[i] - q[i]);
    return 0.5 * acc;
}

double eigenfunction_at(const SpectralData& sd, double x) { return interpolate(sd.kernel, sd.h, x); }

EquilibriumState equilibrium_state(const SpectralData& sd, const CircleMap& map) {
    EquilibriumState eq;
    eq.lambda1 = sd.lambda1;
    eq.t = sd.t;
    eq.nodes = sd.nodes;
    const std::size_t n = sd.h.size();
    eq.mu.resize(n);
    eq.jacobian.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        eq.mu[i] = sd.h[i] * sd.nu[i];
        total += eq.mu[i];
    }
    for (double& v : eq.mu) v /= total;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sd.nodes[i];
        const double hx = sd.h[i];
        const double hfx = eigenfunction_at(sd, evaluate(map, x));
        if (!(hx > 0.0) || !(hfx > 0.0)) {
            std::ostringstream os;
            os << "eigenfunction not positive near x=" << x << " (h=" << hx << ", h(f(x))=" << hfx << ")";
            throw NumericalError("equilibrium_state", os.str());
        }
        eq.jacobian[i] = sd.lambda1 * std::pow(map.derivative(x), sd.t) * hfx / hx;
    }
    return eq;
}

double g_function_sum(const SpectralData& sd, const CircleMap& map, double x) {
    const double hx = eigenfunction_at(sd, x);
    double acc = 0.0;
    for (double y : inverse_branches(map, x))
        acc += std::pow(map.derivative(y), -sd.t) * eigenfunction_at(sd, y);
    return acc / (sd.lambda1 * hx);
}

}  // namespace circtherm

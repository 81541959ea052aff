#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "circtherm/map_zoo.hpp"
#include "circtherm/transfer_op.hpp"

namespace circtherm {

/// Matrices up to this size are diagonalised densely; larger ones go through
/// power iteration.
inline constexpr int kDenseLimit = 1024;
inline constexpr long kMaxPowerIterations = 100000;
inline constexpr double kPowerTolerance = 1e-10;

/// Eigenvalues in descending modulus (ties: larger real part first, then
/// smaller imaginary part) with matching right eigenvectors.
struct LeadingSpectrum {
    std::vector<std::complex<double>> values;
    std::vector<Eigen::VectorXcd> vectors;
    bool converged = true;
    long iterations = 0;
    std::string method;
};

/// True when a precedes b in the spectral order above.
bool spectral_order(std::complex<double> a, std::complex<double> b);

/// k leading eigenpairs. Dense decomposition for n <= kDenseLimit; otherwise
/// block power iteration from the all-ones vector plus deterministic Fourier
/// modes, with Rayleigh-Ritz extraction. A run that does not reach relative
/// residual 1e-10 within 1e5 iterations returns its best estimates with
/// `converged = false`; leading_spectrum_dense is the fallback.
LeadingSpectrum leading_spectrum(const OperatorMatrix& m, int k);
LeadingSpectrum leading_spectrum_dense(const Eigen::MatrixXd& a, int k, bool with_vectors = true);
LeadingSpectrum leading_spectrum_iterative(const SparseRowMatrix& a, int k,
                                           long max_iterations = kMaxPowerIterations,
                                           double tolerance = kPowerTolerance);

struct SpectralData {
    double lambda1 = 0.0;
    double lambda2_mod = 0.0;
    double gap_ratio = 0.0;
    /// Right eigenvector samples, positive for a Perron eigenvalue.
    std::vector<double> h;
    /// Left eigenvector as a probability vector on the nodes; sum nu_i h_i = 1.
    std::vector<double> nu;
    std::vector<double> nodes;
    Scheme scheme = Scheme::ulam;
    Kernel kernel = Kernel::indicator;
    int n = 0;
    double t = 0.0;
    /// False when the iterative path hit its iteration cap; the values are
    /// then the best available estimates.
    bool converged = true;
    long iterations = 0;
};

/// Perron data of the discretised operator. Throws ComplexLeadingEigenvalue
/// when the dominant eigenvalue is not real positive (relative imaginary
/// part above 1e-9).
SpectralData spectral_data(const OperatorMatrix& m);
SpectralData spectral_data(const CircleMap& map, double t, Scheme scheme, int n);

/// Dominant eigenvalue only (cheaper than spectral_data).
double leading_eigenvalue(const OperatorMatrix& m, bool* converged = nullptr);

/// Left power iteration nu <- nu M / |nu M|_1 from `start` until successive
/// iterates differ by <= tolerance in total variation.
std::vector<double> eigenmeasure_power_iteration(const OperatorMatrix& m, std::span<const double> start,
                                                 double tolerance = 1e-13,
                                                 long max_iterations = kMaxPowerIterations);

double total_variation(std::span<const double> p, std::span<const double> q);

struct EquilibriumState {
    /// mu_i proportional to h_i nu_i, summing to 1.
    std::vector<double> mu;
    /// J_i = lambda1 |Df(x_i)|^t h(f(x_i)) / h(x_i).
    std::vector<double> jacobian;
    std::vector<double> nodes;
    double lambda1 = 0.0;
    double t = 0.0;
};

/// Throws NumericalError if the eigenfunction is not positive where the
/// jacobian needs it.
EquilibriumState equilibrium_state(const SpectralData& sd, const CircleMap& map);

/// Interpolant of the eigenfunction samples in the scheme's basis.
double eigenfunction_at(const SpectralData& sd, double x);

/// sum over preimages y of x of 1/J(y); equals 1 for an exact eigenpair.
double g_function_sum(const SpectralData& sd, const CircleMap& map, double x);

}  // namespace circtherm

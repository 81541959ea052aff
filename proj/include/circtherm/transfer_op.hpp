#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "circtherm/map_zoo.hpp"

namespace circtherm {

/// phi_t(y) = -t log|Df(y)|. The transfer weight e^{phi_t} = |Df|^{-t} is 1 at
/// neutral points for every t.
struct GeometricPotential {
    double t = 0.0;

    double value(double abs_df) const { return -t * std::log(abs_df); }
    double weight(double abs_df) const { return std::pow(abs_df, -t); }
};

enum class Scheme { ulam, collocation };

/// Interpolation basis attached to the nodes of an OperatorMatrix.
enum class Kernel {
    indicator,      // ulam cells
    trigonometric,  // periodic cardinal (Dirichlet) interpolation, even n
    hat,            // periodic piecewise-linear interpolation
};

std::string to_string(Scheme scheme);
std::string to_string(Kernel kernel);
/// Throws DomainError for anything but "ulam" or "collocation".
Scheme scheme_from_string(const std::string& text);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Finite stand-in for L_{f,-t log|Df|}: (M g)_i approximates (L g)(node_i)
/// when g_j are the samples (or cell values) of g at node_j.
struct OperatorMatrix {
    Scheme scheme = Scheme::ulam;
    Kernel kernel = Kernel::indicator;
    int n = 0;
    double t = 0.0;
    std::vector<double> nodes;
    SparseRowMatrix entries;

    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries); }
};

/// sum over preimages y of x of |Df(y)|^{-t} g(y).
std::complex<double> apply_pointwise(const CircleMap& map, double t,
                                     const std::function<std::complex<double>(double)>& g, double x);

/// Nodes i/n. Entry (i,j) sums |Df(y)|^{-t} D_j(y) over the preimages y of
/// node i, with D_j the trigonometric cardinal function for smooth maps and
/// the hat function for piecewise-smooth ones. Requires even n >= 8.
OperatorMatrix assemble_collocation(const CircleMap& map, double t, int n);

/// Cells [i/n, (i+1)/n) with midpoints m_i. Entry (i,j) sums |Df(y)|^{-t}
/// over the preimages y of m_i lying in cell j. Requires n >= 8.
OperatorMatrix assemble_ulam(const CircleMap& map, double t, int n);

/// Dispatches on `scheme`.
OperatorMatrix assemble(const CircleMap& map, double t, Scheme scheme, int n);

/// Same as the above with an explicit minimum size (the public entry points
/// use 8); exposed for hand-checkable tiny matrices in tests.
OperatorMatrix assemble_unchecked(const CircleMap& map, double t, Scheme scheme, int n);

/// Value at x of the interpolant of `samples` in the matrix's basis.
double interpolate(Kernel kernel, std::span<const double> samples, double x);

/// Node samples of g for the matrix's basis (point values at the nodes).
std::vector<double> sample(const OperatorMatrix& m, const std::function<double(double)>& g);

/// Row-major "i,j,value" listing of the nonzero entries.
void write_csv(const OperatorMatrix& m, std::ostream& os);

}  // namespace circtherm

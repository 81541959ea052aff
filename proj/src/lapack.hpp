#pragma once

// Thin wrappers over the LAPACK routines used by the dense spectral path.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace circtherm::lapack {

struct Eigensystem {
    std::vector<std::complex<double>> values;
    /// Right eigenvectors as columns; empty unless requested.
    Eigen::MatrixXcd vectors;
};

/// General real eigenproblem (dgeev). `a` is consumed.
Eigensystem eig(Eigen::MatrixXd a, bool right_vectors);

/// LU factorisation of a square matrix (dgetrf) with solves against A and A^T.
class LU {
public:
    explicit LU(Eigen::MatrixXd a);
    bool singular() const { return singular_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::VectorXd solve_transposed(const Eigen::VectorXd& b) const;

private:
    Eigen::MatrixXd lu_;
    std::vector<int> pivots_;
    bool singular_ = false;
};

}  // namespace circtherm::lapack

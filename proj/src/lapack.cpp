#include "lapack.hpp"

#include <lapacke.h>

#include "circtherm/errors.hpp"

namespace circtherm::lapack {

Eigensystem eig(Eigen::MatrixXd a, bool right_vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    Eigen::MatrixXd vr;
    if (right_vectors) vr.resize(n, n);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', right_vectors ? 'V' : 'N', n, a.data(), n, wr.data(), wi.data(),
                      nullptr, 1, right_vectors ? vr.data() : nullptr, right_vectors ? n : 1);
    if (info != 0) throw SolverFailure("dgeev", "LAPACK returned info=" + std::to_string(info));

    Eigensystem out;
    out.values.resize(static_cast<std::size_t>(n));
    for (lapack_int i = 0; i < n; ++i)
        out.values[static_cast<std::size_t>(i)] = {wr[static_cast<std::size_t>(i)], wi[static_cast<std::size_t>(i)]};
    if (right_vectors) {
        // Conjugate pairs share two real columns: v = vr(:,j) +/- i vr(:,j+1).
        out.vectors.resize(n, n);
        for (lapack_int j = 0; j < n; ++j) {
            const auto sj = static_cast<std::size_t>(j);
            if (wi[sj] == 0.0) {
                out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
            } else if (j + 1 < n) {
                const Eigen::VectorXd re = vr.col(j), im = vr.col(j + 1);
                out.vectors.col(j).real() = re;
                out.vectors.col(j).imag() = im;
                out.vectors.col(j + 1).real() = re;
                out.vectors.col(j + 1).imag() = -im;
                ++j;
            }
        }
    }
    return out;
}

LU::LU(Eigen::MatrixXd a) : lu_(std::move(a)), pivots_(static_cast<std::size_t>(lu_.rows())) {
    const lapack_int n = static_cast<lapack_int>(lu_.rows());
    const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
    if (info < 0) throw SolverFailure("dgetrf", "LAPACK returned info=" + std::to_string(info));
    singular_ = info > 0;
}

Eigen::VectorXd LU::solve(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = b;
    const lapack_int n = static_cast<lapack_int>(lu_.rows());
    LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', n, 1, lu_.data(), n, pivots_.data(), x.data(), n);
    return x;
}

Eigen::VectorXd LU::solve_transposed(const Eigen::VectorXd& b) const {
    Eigen::VectorXd x = b;
    const lapack_int n = static_cast<lapack_int>(lu_.rows());
    LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'T', n, 1, lu_.data(), n, pivots_.data(), x.data(), n);
    return x;
}

}  // namespace circtherm::lapack

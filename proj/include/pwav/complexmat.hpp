#pragma once

#include <Eigen/Dense>
#include <vector>

#include "pwav/padic.hpp"

namespace pwav {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// max |(U* U - I)_{ij}|
double unitarity_deviation(const Mat& U);
bool is_unitary(const Mat& U, double tol = kTol);

/// Schur decomposition A = Q T Q* with the (nearly diagonal) T of a
/// normal matrix; returns Q with columns ordered by increasing
/// eigenvalue angle in [0, 2pi). Throws if A is not normal enough for
/// the off-diagonal part of T to vanish at tol.
struct EigenDecomp {
    Mat Q;                    // unitary, A = Q diag(lambda) Q*
    std::vector<cplx> lambda; // sorted by angle
};
EigenDecomp diagonalize_normal(const Mat& A, double tol = 1e-7);

/// Unitary matrix whose first row is the given unit vector alpha.
Mat unitary_with_first_row(const Vec& alpha);

/// Deterministic Gram-Schmidt completion: orthonormal row completing
/// the given orthonormal rows, seeded from the standard basis, with
/// positive real leading entry.
Vec complete_orthonormal_row(const Mat& rows);

/// DFT matrix (p^{-n/2} e^{-2 pi i jk/p^n}), size p^n.
Mat dft_matrix(int p, int n);

/// Singular values (descending) and the right singular vector of the
/// smallest singular value.
struct SvdInfo {
    std::vector<double> sv;
    Vec smallest_right;
};
SvdInfo svd_info(const Mat& A);

/// Numerical rank at relative threshold rel_tol.
int numerical_rank(const Mat& A, double rel_tol = kRankTol);

}  // namespace pwav

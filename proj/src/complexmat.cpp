#include "pwav/complexmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace pwav {

double unitarity_deviation(const Mat& U) {
    if (U.rows() != U.cols()) return std::numeric_limits<double>::infinity();
    Mat d = U.adjoint() * U - Mat::Identity(U.rows(), U.cols());
    return d.cwiseAbs().maxCoeff();
}

bool is_unitary(const Mat& U, double tol) {
    return unitarity_deviation(U) <= tol;
}

EigenDecomp diagonalize_normal(const Mat& A, double tol) {
    Eigen::ComplexSchur<Mat> schur(A);
    Mat T = schur.matrixT();
    Mat Q = schur.matrixU();
    const auto n = A.rows();
    double offdiag = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            offdiag = std::max(offdiag, std::abs(T(i, j)));
    if (offdiag > tol)
        throw std::runtime_error("diagonalize_normal: matrix is not normal");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto angle = [&](int i) {
        double a = std::arg(T(i, i));
        if (a < -1e-15) a += 2.0 * std::numbers::pi;
        return a;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return angle(a) < angle(b); });

    EigenDecomp out;
    out.Q = Mat(n, n);
    out.lambda.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.Q.col(k) = Q.col(order[k]);
        // deterministic phase: first sizable entry made positive real
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(out.Q(i, k)) > 1e-7) {
                out.Q.col(k) *= std::abs(out.Q(i, k)) / out.Q(i, k);
                break;
            }
        }
        out.lambda[k] = T(order[k], order[k]);
    }
    return out;
}

Mat unitary_with_first_row(const Vec& alpha) {
    const auto n = alpha.size();
    Vec v = alpha.conjugate();  // wanted first column of the transposed factor
    double nv = v.norm();
    if (std::abs(nv - 1.0) > 1e-6)
        throw std::invalid_argument("unitary_with_first_row: alpha not unit");
    v /= nv;

    // phase so the first entry is real and nonnegative
    cplx phase(1.0, 0.0);
    if (std::abs(v(0)) > 1e-14) phase = v(0) / std::abs(v(0));
    Vec vp = v / phase;

    Mat H = Mat::Identity(n, n);
    Vec w = vp - Vec::Unit(n, 0);
    double wn2 = w.squaredNorm();
    if (wn2 > 1e-28) H -= (2.0 / wn2) * (w * w.adjoint());
    // V has first column v; U = V* has first row alpha
    Mat V = phase * H;
    return V.adjoint();
}

Vec complete_orthonormal_row(const Mat& rows) {
    const auto n = rows.cols();
    for (Eigen::Index s = 0; s < n; ++s) {
        Vec cand = Vec::Unit(n, s);
        for (Eigen::Index r = 0; r < rows.rows(); ++r) {
            Vec row = rows.row(r).transpose();
            cplx proj = row.adjoint() * cand;
            cand -= proj * row;
        }
        double nc = cand.norm();
        if (nc > 1e-8) {
            cand /= nc;
            // positive real leading nonzero entry
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::abs(cand(i)) > 1e-12) {
                    cand *= std::abs(cand(i)) / cand(i);
                    break;
                }
            }
            return cand;
        }
    }
    throw std::runtime_error("complete_orthonormal_row: no completion found");
}

Mat dft_matrix(int p, int n) {
    std::int64_t N = ipow(p, n);
    Mat F(N, N);
    double s = 1.0 / std::sqrt(static_cast<double>(N));
    for (std::int64_t j = 0; j < N; ++j)
        for (std::int64_t k = 0; k < N; ++k)
            F(j, k) = s * std::conj(root_of_unity(j * k % N, N));
    return F;
}

SvdInfo svd_info(const Mat& A) {
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
    SvdInfo out;
    const auto& sv = svd.singularValues();
    out.sv.assign(sv.data(), sv.data() + sv.size());
    out.smallest_right = svd.matrixV().col(sv.size() - 1);
    return out;
}

int numerical_rank(const Mat& A, double rel_tol) {
    Eigen::JacobiSVD<Mat> svd(A);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double cutoff = rel_tol * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(0) > 0) ++r;
    return r;
}

}  // namespace pwav

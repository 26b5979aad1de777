#pragma once

#include <map>
#include <optional>
#include <string>

#include "pwav/padic.hpp"

namespace pwav {

/// A Bruhat-Schwartz function: p^m-periodic, supported in |x|_p <= p^M,
/// stored as values on the p^{m+M} coset representatives v/p^M.
/// Always canonical: minimal (m, M), zero entries omitted, m + M >= 0.
class TestFunction {
public:
    explicit TestFunction(Prime p) : prime_(p) {}  // zero function
    TestFunction(Prime p, int scale, int support_exp,
                 std::map<std::int64_t, cplx> coeffs);

    Prime prime() const { return prime_; }
    int scale() const { return scale_; }            // m
    int support_exp() const { return supp_; }       // M
    const std::map<std::int64_t, cplx>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    /// Value on the coset of x; x may be any rational with p-power
    /// denominator (negative allowed), reduced by p^m-periodicity.
    cplx evaluate(PRational x) const;

    double norm() const;

private:
    Prime prime_;
    int scale_ = 0;
    int supp_ = 0;
    std::map<std::int64_t, cplx> coeffs_;

    void canonicalize();
};

struct ScaledTranslate {
    int m_shift = 0;     // j
    PRational shift{};   // a
};

/// Indicator of Z_p (the Haar scaling function phi).
TestFunction haar_phi(Prime p);

/// p^{m/2} times the indicator of the coset with index v among cosets of
/// p^m Z_p inside the ball p^M (a unit-norm Parseval probe phi_{m,t}).
TestFunction coset_probe(Prime p, int m, int M, std::int64_t v);

TestFunction linear_combine(const std::vector<cplx>& coeffs,
                            const std::vector<TestFunction>& fs);

/// f_{j,a}(x) = p^{j/2} f(x/p^j - a).
TestFunction scaled_translate(const TestFunction& f, int j, PRational a);
inline TestFunction scaled_translate(const TestFunction& f, ScaledTranslate st) {
    return scaled_translate(f, st.m_shift, st.shift);
}

/// (Tf)(x) = f(x - 1).
TestFunction translate_by_one(const TestFunction& f);

cplx inner_product(const TestFunction& f, const TestFunction& g);
cplx integral(const TestFunction& f);

/// Orthogonal projection onto V_k (coset averaging).
TestFunction project_V(const TestFunction& f, int k);

/// project_V(f, k+1) - project_V(f, k).
TestFunction w_part(const TestFunction& f, int k);

bool is_periodic(const TestFunction& f, int k);

/// Whether f lies in V_k (alias of is_periodic, engine-facing name).
inline bool is_in_V(const TestFunction& f, int k) { return is_periodic(f, k); }

/// f_l = p^{-m} sum_j e^{2 pi i j l / p^m} T^j f; requires f in V_m.
TestFunction eigen_project(const TestFunction& f, std::int64_t l, int m);

/// Unit eigenvalue of T on f, snapped to a p^m-th root of unity, or
/// nullopt if f is not an eigenfunction at tolerance tol.
std::optional<cplx> translation_eigenvalue(const TestFunction& f,
                                           double tol = kTol);

TestFunction fourier(const TestFunction& f);
TestFunction fourier_inverse(const TestFunction& f);

/// Max coefficient deviation after refining both to a common (m, M).
double max_coeff_diff(const TestFunction& f, const TestFunction& g);
bool approx_equal(const TestFunction& f, const TestFunction& g,
                  double tol = kTol);

std::string write_pwf(const TestFunction& f);
TestFunction read_pwf(const std::string& text);

}  // namespace pwav

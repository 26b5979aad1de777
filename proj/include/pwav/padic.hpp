#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pwav {

using cplx = std::complex<double>;

/// Exact values are compared coefficient-wise at this tolerance.
inline constexpr double kTol = 1e-9;
/// Numerical-rank threshold (relative to the largest singular value).
inline constexpr double kRankTol = 1e-7;

class Prime {
public:
    explicit Prime(int p);
    int value() const { return p_; }
    friend bool operator==(Prime a, Prime b) { return a.p_ == b.p_; }
    friend bool operator!=(Prime a, Prime b) { return a.p_ != b.p_; }

private:
    int p_;
};

/// p^e for e >= 0, throwing on int64 overflow.
std::int64_t ipow(int p, int e);

/// A rational num/p^exp with p-power denominator. num may be negative
/// (translation offsets); canonical form has exp == 0 or p not dividing num.
struct PRational {
    std::int64_t num = 0;
    int exp = 0;  // denominator p^exp, exp >= 0

    PRational() = default;
    PRational(std::int64_t k, int n) : num(k), exp(n) {}

    bool is_zero() const { return num == 0; }
    bool is_nonneg() const { return num >= 0; }
};

PRational normalize(Prime p, PRational x);
PRational add(Prime p, PRational a, PRational b);
PRational sub(Prime p, PRational a, PRational b);
PRational mul_pow(Prime p, PRational a, int k);  // a * p^k
bool equal(Prime p, PRational a, PRational b);

/// |x|_p as a PRational (p^{-gamma}); 0 for x = 0.
PRational padic_norm(Prime p, PRational x);

/// p-adic valuation gamma of x (|x|_p = p^{-gamma}); throws for x = 0.
int valuation(Prime p, PRational x);

/// Exponent e with |x|_p = p^e; INT_MIN-free convention: returns
/// -valuation for x != 0 and a very small value for 0.
int norm_exp(Prime p, PRational x);

/// Fractional part {x}_p: the digits of x at negative powers of p.
/// Result is in I_p (non-negative, < 1) and x - {x}_p is a p-adic integer.
PRational frac_part(Prime p, PRational x);

/// chi_p(x) = e^{2 pi i {x}_p}, evaluated from the exact reduced angle.
cplx character(Prime p, PRational x);

/// e^{2 pi i num/den} from the exact rational angle.
cplx root_of_unity(std::int64_t num, std::int64_t den);

struct DigitExpansion {
    Prime prime;
    int first_index = 0;                // gamma
    std::vector<int> digits;            // x_gamma, x_{gamma+1}, ...; empty for 0

    PRational reconstruct() const;
};

DigitExpansion digit_expansion(Prime p, PRational x);  // requires x >= 0

/// Canonical index of the coset of p^m Z_p containing x, among cosets
/// inside the ball |x|_p <= p^M. Requires m + M >= 0 and |x|_p <= p^M.
std::int64_t coset_index(Prime p, PRational x, int m, int M);

/// Representative v/p^M of the coset with index v; inverse of coset_index.
PRational index_to_rep(Prime p, std::int64_t v, int m, int M);

}  // namespace pwav

#include "pwav/padic.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace pwav {

Prime::Prime(int p) : p_(p) {
    if (p < 2) throw std::invalid_argument("prime must be >= 2");
    for (int d = 2; static_cast<std::int64_t>(d) * d <= p; ++d)
        if (p % d == 0) throw std::invalid_argument("p is not prime");
}

std::int64_t ipow(int p, int e) {
    if (e < 0) throw std::invalid_argument("ipow: negative exponent");
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > std::numeric_limits<std::int64_t>::max() / p)
            throw std::overflow_error("ipow: overflow");
        r *= p;
    }
    return r;
}

PRational normalize(Prime p, PRational x) {
    if (x.num == 0) return {0, 0};
    while (x.exp > 0 && x.num % p.value() == 0) {
        x.num /= p.value();
        --x.exp;
    }
    return x;
}

PRational add(Prime p, PRational a, PRational b) {
    int e = std::max(a.exp, b.exp);
    std::int64_t na = a.num * ipow(p.value(), e - a.exp);
    std::int64_t nb = b.num * ipow(p.value(), e - b.exp);
    return normalize(p, {na + nb, e});
}

PRational sub(Prime p, PRational a, PRational b) {
    return add(p, a, {-b.num, b.exp});
}

PRational mul_pow(Prime p, PRational a, int k) {
    if (a.num == 0) return {0, 0};
    if (k >= 0) {
        int drop = std::min(k, a.exp);
        return normalize(p, {a.num * ipow(p.value(), k - drop), a.exp - drop});
    }
    return normalize(p, {a.num, a.exp - k});
}

bool equal(Prime p, PRational a, PRational b) {
    a = normalize(p, a);
    b = normalize(p, b);
    return a.num == b.num && a.exp == b.exp;
}

int valuation(Prime p, PRational x) {
    x = normalize(p, x);
    if (x.num == 0) throw std::domain_error("valuation of zero");
    if (x.exp > 0) return -x.exp;
    int v = 0;
    std::int64_t k = x.num < 0 ? -x.num : x.num;
    while (k % p.value() == 0) {
        k /= p.value();
        ++v;
    }
    return v;
}

int norm_exp(Prime p, PRational x) {
    if (normalize(p, x).num == 0) return std::numeric_limits<int>::min() / 2;
    return -valuation(p, x);
}

PRational padic_norm(Prime p, PRational x) {
    if (normalize(p, x).num == 0) return {0, 0};
    int g = valuation(p, x);
    if (g >= 0) return {1, g};
    return {ipow(p.value(), -g), 0};
}

PRational frac_part(Prime p, PRational x) {
    x = normalize(p, x);
    if (x.exp == 0) return {0, 0};
    std::int64_t den = ipow(p.value(), x.exp);
    std::int64_t k = x.num % den;
    if (k < 0) k += den;
    return normalize(p, {k, x.exp});
}

cplx root_of_unity(std::int64_t num, std::int64_t den) {
    if (den <= 0) throw std::invalid_argument("root_of_unity: den <= 0");
    num %= den;
    if (num < 0) num += den;
    // reduce the fraction so special angles evaluate exactly
    std::int64_t a = num, b = den;
    while (b) { std::int64_t t = a % b; a = b; b = t; }
    if (a > 1) { num /= a; den /= a; }
    if (den == 1) return {1.0, 0.0};
    if (den == 2) return {-1.0, 0.0};
    if (den == 4) return num == 1 ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
    double angle = 2.0 * std::numbers::pi * static_cast<double>(num) /
                   static_cast<double>(den);
    return {std::cos(angle), std::sin(angle)};
}

cplx character(Prime p, PRational x) {
    PRational f = frac_part(p, x);
    if (f.num == 0) return {1.0, 0.0};
    return root_of_unity(f.num, ipow(p.value(), f.exp));
}

PRational DigitExpansion::reconstruct() const {
    PRational r{0, 0};
    for (std::size_t i = 0; i < digits.size(); ++i) {
        int j = first_index + static_cast<int>(i);
        r = add(prime, r, mul_pow(prime, {digits[i], 0}, j));
    }
    return r;
}

DigitExpansion digit_expansion(Prime p, PRational x) {
    x = normalize(p, x);
    if (x.num < 0) throw std::invalid_argument("digit_expansion: negative value");
    DigitExpansion d{p, 0, {}};
    if (x.num == 0) return d;
    std::int64_t k = x.num;
    int j = -x.exp;
    // skip p-divisible head of an integer numerator
    while (k % p.value() == 0) {
        k /= p.value();
        ++j;
    }
    d.first_index = j;
    while (k > 0) {
        d.digits.push_back(static_cast<int>(k % p.value()));
        k /= p.value();
    }
    return d;
}

std::int64_t coset_index(Prime p, PRational x, int m, int M) {
    if (m + M < 0) throw std::invalid_argument("coset_index: m + M < 0");
    x = normalize(p, x);
    if (x.num < 0) throw std::invalid_argument("coset_index: negative point");
    if (x.num == 0) return 0;
    int t = M - x.exp;
    std::int64_t kk;
    if (t >= 0) {
        kk = x.num * ipow(p.value(), t);
    } else {
        std::int64_t d = ipow(p.value(), -t);
        if (x.num % d != 0) throw std::out_of_range("coset_index: |x|_p > p^M");
        kk = x.num / d;
    }
    return kk % ipow(p.value(), M + m);
}

PRational index_to_rep(Prime p, std::int64_t v, int m, int M) {
    if (m + M < 0) throw std::invalid_argument("index_to_rep: m + M < 0");
    if (v < 0 || v >= ipow(p.value(), M + m))
        throw std::out_of_range("index_to_rep: index out of range");
    if (M >= 0) return normalize(p, {v, M});
    return mul_pow(p, {v, 0}, -M);
}

}  // namespace pwav

#include "pwav/testfn.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace pwav {

namespace {

constexpr double kCanonEps = 1e-12;
constexpr std::int64_t kMaxTable = std::int64_t{1} << 24;

std::int64_t table_size(Prime p, int m, int M) {
    std::int64_t s = ipow(p.value(), m + M);
    if (s > kMaxTable) throw std::overflow_error("test function table too large");
    return s;
}

cplx lookup(const std::map<std::int64_t, cplx>& c, std::int64_t v) {
    auto it = c.find(v);
    return it == c.end() ? cplx{0.0, 0.0} : it->second;
}

std::string dtos(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

double stod_exact(const std::string& s) {
    double d = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), d);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("pwf: bad decimal literal '" + s + "'");
    return d;
}

}  // namespace

TestFunction::TestFunction(Prime p, int scale, int support_exp,
                           std::map<std::int64_t, cplx> coeffs)
    : prime_(p), scale_(scale), supp_(support_exp), coeffs_(std::move(coeffs)) {
    if (scale_ + supp_ < 0)
        throw std::invalid_argument("TestFunction: m + M < 0");
    std::int64_t size = table_size(prime_, scale_, supp_);
    for (const auto& [v, c] : coeffs_)
        if (v < 0 || v >= size)
            throw std::out_of_range("TestFunction: coefficient index out of range");
    canonicalize();
}

void TestFunction::canonicalize() {
    const int p = prime_.value();
    double amax = 0.0;
    for (const auto& [v, c] : coeffs_) amax = std::max(amax, std::abs(c));
    const double eps = kCanonEps * std::max(1.0, amax);
    // exact zeros and cancellation residue both go
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = (std::abs(it->second) <= eps) ? coeffs_.erase(it) : std::next(it);
    if (coeffs_.empty()) {
        scale_ = 0;
        supp_ = 0;
        return;
    }

    bool changed = true;
    while (changed && scale_ + supp_ > 0) {
        changed = false;
        // drop the top digit when values agree across the p branches
        std::int64_t half = ipow(p, scale_ + supp_ - 1);
        bool mergeable = true;
        for (const auto& [v, c] : coeffs_) {
            std::int64_t v0 = v % half;
            cplx base = lookup(coeffs_, v0);
            for (int t = 1; t < p && mergeable; ++t)
                if (std::abs(lookup(coeffs_, v0 + t * half) - base) > eps)
                    mergeable = false;
            if (!mergeable) break;
        }
        if (mergeable) {
            std::map<std::int64_t, cplx> merged;
            for (const auto& [v, c] : coeffs_)
                if (v < half) merged.emplace(v, c);
            // entries only present in upper branches but essentially zero
            // in the base branch disappear with the merge
            coeffs_ = std::move(merged);
            --scale_;
            changed = true;
            if (coeffs_.empty()) {
                scale_ = 0;
                supp_ = 0;
                return;
            }
            continue;
        }
        // shrink the support ball when the outer shell is empty
        bool shrinkable = true;
        for (const auto& [v, c] : coeffs_) {
            if (v % p != 0 && std::abs(c) > eps) {
                shrinkable = false;
                break;
            }
        }
        if (shrinkable) {
            std::map<std::int64_t, cplx> shrunk;
            for (const auto& [v, c] : coeffs_)
                if (v % p == 0 && c != cplx{0.0, 0.0}) shrunk.emplace(v / p, c);
            coeffs_ = std::move(shrunk);
            --supp_;
            changed = true;
            if (coeffs_.empty()) {
                scale_ = 0;
                supp_ = 0;
                return;
            }
        }
    }
}

cplx TestFunction::evaluate(PRational x) const {
    if (coeffs_.empty()) return {0.0, 0.0};
    // reduce modulo p^m Z_p using p^m-periodicity
    PRational r = mul_pow(prime_, frac_part(prime_, mul_pow(prime_, x, -scale_)),
                          scale_);
    if (!r.is_zero() && norm_exp(prime_, r) > supp_) return {0.0, 0.0};
    return lookup(coeffs_, coset_index(prime_, r, scale_, supp_));
}

double TestFunction::norm() const {
    double s = 0.0;
    for (const auto& [v, c] : coeffs_) s += std::norm(c);
    return std::sqrt(s * std::pow(prime_.value(), -scale_));
}

TestFunction haar_phi(Prime p) {
    return TestFunction(p, 0, 0, {{0, {1.0, 0.0}}});
}

TestFunction coset_probe(Prime p, int m, int M, std::int64_t v) {
    double amp = std::pow(p.value(), m / 2.0);
    return TestFunction(p, m, M, {{v, {amp, 0.0}}});
}

TestFunction linear_combine(const std::vector<cplx>& coeffs,
                            const std::vector<TestFunction>& fs) {
    if (coeffs.size() != fs.size())
        throw std::invalid_argument("linear_combine: size mismatch");
    if (fs.empty()) throw std::invalid_argument("linear_combine: empty input");
    Prime p = fs.front().prime();
    int m = 0, M = 0;
    bool any = false;
    for (const auto& f : fs) {
        if (f.prime() != p) throw std::invalid_argument("linear_combine: mixed primes");
        if (f.is_zero()) continue;
        if (!any) {
            m = f.scale();
            M = f.support_exp();
            any = true;
        } else {
            m = std::max(m, f.scale());
            M = std::max(M, f.support_exp());
        }
    }
    if (!any) return TestFunction(p);

    std::map<std::int64_t, cplx> acc;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& f = fs[i];
        if (f.is_zero() || coeffs[i] == cplx{0.0, 0.0}) continue;
        std::int64_t shift = ipow(p.value(), M - f.support_exp());
        std::int64_t reps = ipow(p.value(), m - f.scale());
        std::int64_t block = ipow(p.value(), f.scale() + M);
        for (const auto& [v, c] : f.coeffs())
            for (std::int64_t t = 0; t < reps; ++t)
                acc[v * shift + t * block] += coeffs[i] * c;
    }
    return TestFunction(p, m, M, std::move(acc));
}

TestFunction scaled_translate(const TestFunction& f, int j, PRational a) {
    Prime p = f.prime();
    if (f.is_zero()) return f;
    int m2 = f.scale() + j;
    int M2 = std::max(f.support_exp(),
                      a.is_zero() ? f.support_exp() : norm_exp(p, a)) - j;
    M2 = std::max(M2, -m2);
    double amp = std::pow(p.value(), j / 2.0);
    std::map<std::int64_t, cplx> out;
    std::int64_t size = table_size(p, m2, M2);
    for (std::int64_t v = 0; v < size; ++v) {
        PRational x = index_to_rep(p, v, m2, M2);
        cplx val = amp * f.evaluate(sub(p, mul_pow(p, x, -j), a));
        if (val != cplx{0.0, 0.0}) out.emplace(v, val);
    }
    return TestFunction(p, m2, M2, std::move(out));
}

TestFunction translate_by_one(const TestFunction& f) {
    return scaled_translate(f, 0, PRational{1, 0});
}

cplx inner_product(const TestFunction& f, const TestFunction& g) {
    if (f.prime() != g.prime())
        throw std::invalid_argument("inner_product: mixed primes");
    if (f.is_zero() || g.is_zero()) return {0.0, 0.0};
    Prime p = f.prime();
    int mc = std::max(f.scale(), g.scale());
    int Mmin = std::min(f.support_exp(), g.support_exp());
    std::int64_t size = table_size(p, mc, Mmin);
    double meas = std::pow(p.value(), -mc);
    cplx s{0.0, 0.0};
    for (std::int64_t v = 0; v < size; ++v) {
        PRational x = index_to_rep(p, v, mc, Mmin);
        s += f.evaluate(x) * std::conj(g.evaluate(x));
    }
    return s * meas;
}

cplx integral(const TestFunction& f) {
    cplx s{0.0, 0.0};
    for (const auto& [v, c] : f.coeffs()) s += c;
    return s * std::pow(f.prime().value(), -f.scale());
}

TestFunction project_V(const TestFunction& f, int k) {
    if (k >= f.scale() || f.is_zero()) return f;
    Prime p = f.prime();
    int M2 = std::max(f.support_exp(), -k);
    std::int64_t size = table_size(p, k, M2);
    std::int64_t sub = ipow(p.value(), f.scale() - k);
    std::map<std::int64_t, cplx> out;
    for (std::int64_t v = 0; v < size; ++v) {
        PRational x = index_to_rep(p, v, k, M2);
        cplx s{0.0, 0.0};
        for (std::int64_t t = 0; t < sub; ++t)
            s += f.evaluate(add(p, x, mul_pow(p, {t, 0}, k)));
        s /= static_cast<double>(sub);
        if (s != cplx{0.0, 0.0}) out.emplace(v, s);
    }
    return TestFunction(p, k, M2, std::move(out));
}

TestFunction w_part(const TestFunction& f, int k) {
    return linear_combine({{1.0, 0.0}, {-1.0, 0.0}},
                          {project_V(f, k + 1), project_V(f, k)});
}

bool is_periodic(const TestFunction& f, int k) { return f.scale() <= k; }

TestFunction eigen_project(const TestFunction& f, std::int64_t l, int m) {
    if (!is_in_V(f, m))
        throw std::invalid_argument("eigen_project: f not in V_m");
    Prime p = f.prime();
    std::int64_t P = ipow(p.value(), std::max(m, 0));
    std::vector<cplx> cs;
    std::vector<TestFunction> fns;
    TestFunction g = f;
    for (std::int64_t j = 0; j < P; ++j) {
        cs.push_back(root_of_unity(j * l % P, P) / static_cast<double>(P));
        fns.push_back(g);
        if (j + 1 < P) g = translate_by_one(g);
    }
    return linear_combine(cs, fns);
}

std::optional<cplx> translation_eigenvalue(const TestFunction& f, double tol) {
    if (f.is_zero())
        throw std::invalid_argument("translation_eigenvalue: zero input");
    TestFunction tf = translate_by_one(f);
    double n2 = f.norm();
    cplx lambda = inner_product(tf, f) / (n2 * n2);
    TestFunction resid = linear_combine({{1.0, 0.0}, -lambda}, {tf, f});
    if (resid.norm() > tol * n2) return std::nullopt;
    int m = f.scale();
    if (m <= 0) return cplx{1.0, 0.0};
    std::int64_t P = ipow(f.prime().value(), m);
    double ang = -std::arg(lambda) / (2.0 * std::numbers::pi) * P;
    std::int64_t l = std::llround(ang) % P;
    if (l < 0) l += P;
    return std::conj(root_of_unity(l, P));
}

namespace {

TestFunction fourier_impl(const TestFunction& f, bool inverse) {
    Prime p = f.prime();
    if (f.is_zero()) return f;
    int m = f.scale(), M = f.support_exp();
    std::int64_t P = table_size(p, m, M);
    double meas = std::pow(p.value(), -m);
    std::map<std::int64_t, cplx> out;
    for (std::int64_t w = 0; w < P; ++w) {
        cplx s{0.0, 0.0};
        for (const auto& [v, c] : f.coeffs()) {
            cplx ch = root_of_unity(w * v % P, P);
            s += c * (inverse ? std::conj(ch) : ch);
        }
        s *= meas;
        if (s != cplx{0.0, 0.0}) out.emplace(w, s);
    }
    // scale and support exponents swap roles under the transform
    return TestFunction(p, M, m, std::move(out));
}

}  // namespace

TestFunction fourier(const TestFunction& f) { return fourier_impl(f, false); }
TestFunction fourier_inverse(const TestFunction& f) { return fourier_impl(f, true); }

double max_coeff_diff(const TestFunction& f, const TestFunction& g) {
    if (f.prime() != g.prime())
        throw std::invalid_argument("max_coeff_diff: mixed primes");
    Prime p = f.prime();
    int mc = std::max(f.scale(), g.scale());
    int Mc = std::max(f.support_exp(), g.support_exp());
    std::int64_t size = table_size(p, mc, Mc);
    double d = 0.0;
    for (std::int64_t v = 0; v < size; ++v) {
        PRational x = index_to_rep(p, v, mc, Mc);
        d = std::max(d, std::abs(f.evaluate(x) - g.evaluate(x)));
    }
    return d;
}

bool approx_equal(const TestFunction& f, const TestFunction& g, double tol) {
    return max_coeff_diff(f, g) <= tol;
}

std::string write_pwf(const TestFunction& f) {
    nlohmann::json j;
    j["format"] = "pwf-1";
    j["p"] = f.prime().value();
    j["scale"] = f.scale();
    j["support"] = f.support_exp();
    auto arr = nlohmann::json::array();
    for (const auto& [v, c] : f.coeffs()) {
        arr.push_back({{"v", v}, {"re", dtos(c.real())}, {"im", dtos(c.imag())}});
    }
    j["coeffs"] = std::move(arr);
    return j.dump(2) + "\n";
}

TestFunction read_pwf(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return [](const nlohmann::json& j) {
        if (j.value("format", "") != "pwf-1")
            throw std::runtime_error("pwf: bad format tag");
        Prime p(j.at("p").get<int>());
        int m = j.at("scale").get<int>();
        int M = j.at("support").get<int>();
        std::map<std::int64_t, cplx> coeffs;
        for (const auto& e : j.at("coeffs")) {
            std::int64_t v = e.at("v").get<std::int64_t>();
            double re = e.at("re").is_string() ? stod_exact(e.at("re").get<std::string>())
                                              : e.at("re").get<double>();
            double im = e.at("im").is_string() ? stod_exact(e.at("im").get<std::string>())
                                              : e.at("im").get<double>();
            coeffs[v] = {re, im};
        }
        return TestFunction(p, m, M, std::move(coeffs));
    }(j);
}

}  // namespace pwav

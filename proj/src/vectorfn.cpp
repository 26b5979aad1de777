#include "pwav/vectorfn.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pwav/complexmat.hpp"

namespace pwav {

namespace {

std::string rat_str(Prime p, PRational x) {
    std::ostringstream os;
    x = normalize(p, x);
    os << x.num;
    if (x.exp > 0) os << "/" << p.value() << "^" << x.exp;
    return os.str();
}

/// All b in I_p with |b - c0|_p <= p^s (the shifts whose translate can
/// meet a given support ball).
std::vector<PRational> nearby_shifts(Prime p, PRational c0, int s) {
    std::vector<PRational> out;
    std::set<std::pair<std::int64_t, int>> seen;
    auto push = [&](PRational b) {
        b = normalize(p, b);
        PRational d = sub(p, b, c0);
        if (!(normalize(p, d).is_zero() || norm_exp(p, d) <= s)) return;
        if (seen.insert({b.num, b.exp}).second) out.push_back(b);
    };
    if (s <= 0) {
        push(frac_part(p, c0));
    } else {
        std::int64_t P = ipow(p.value(), s);
        for (std::int64_t d = 0; d < P; ++d)
            push(frac_part(p, add(p, c0, {d, s})));
    }
    return out;
}

}  // namespace

VectorFunction::VectorFunction(Prime p, std::vector<TestFunction> components)
    : prime_(p), components_(std::move(components)) {
    if (components_.empty())
        throw std::invalid_argument("VectorFunction: rank must be >= 1");
    for (const auto& f : components_) {
        if (f.prime() != prime_)
            throw std::invalid_argument("VectorFunction: mixed primes");
        if (f.is_zero())
            throw std::invalid_argument("VectorFunction: zero component");
    }
}

int VectorFunction::max_scale() const {
    int m = components_.front().scale();
    for (const auto& f : components_) m = std::max(m, f.scale());
    return m;
}

int VectorFunction::max_support_exp() const {
    int M = components_.front().support_exp();
    for (const auto& f : components_) M = std::max(M, f.support_exp());
    return M;
}

void CheckReport::add(std::string name, double deviation, double tol,
                      std::string witness) {
    items.push_back({std::move(name), deviation, tol, std::move(witness)});
    if (deviation > 10.0 * tol) {
        verdict = Verdict::fail;
    } else if (deviation > tol && verdict != Verdict::fail) {
        verdict = Verdict::marginal;
    }
}

const CheckItem* CheckReport::worst() const {
    const CheckItem* w = nullptr;
    for (const auto& it : items)
        if (!w || it.deviation / it.tolerance > w->deviation / w->tolerance) w = &it;
    return w;
}

std::string CheckReport::summary() const {
    std::ostringstream os;
    os << (verdict == Verdict::pass     ? "pass"
           : verdict == Verdict::marginal ? "marginal"
                                          : "fail");
    if (const CheckItem* w = worst()) {
        os << " (worst: " << w->name << " deviation " << w->deviation;
        if (!w->witness.empty()) os << " at " << w->witness;
        os << ")";
    }
    return os.str();
}

TestFunction system_member(const VectorFunction& Psi, const WaveletIndex& idx) {
    if (idx.component < 0 || idx.component >= Psi.rank())
        throw std::out_of_range("system_member: bad component index");
    return scaled_translate(Psi.component(idx.component), idx.level, idx.shift);
}

CheckReport zero_mean_check(const VectorFunction& Psi, double tol) {
    CheckReport rep;
    for (int i = 0; i < Psi.rank(); ++i) {
        double dev = std::abs(integral(Psi.component(i)));
        rep.add("zero-mean[" + std::to_string(i + 1) + "]", dev, tol,
                "component " + std::to_string(i + 1));
    }
    return rep;
}

CheckReport orthonormality_check(const VectorFunction& Psi, double tol) {
    CheckReport zm = zero_mean_check(Psi, tol);
    if (zm.verdict == Verdict::fail) return zm;

    Prime p = Psi.prime();
    CheckReport rep = zm;
    for (int mu = 0; mu < Psi.rank(); ++mu) {
        for (int nu = 0; nu < Psi.rank(); ++nu) {
            const TestFunction& fmu = Psi.component(mu);
            const TestFunction& fnu = Psi.component(nu);
            int jmax = std::max(1, fnu.scale() + fmu.support_exp());
            double worst = 0.0;
            std::string wit;
            for (int j = 0; j < jmax; ++j) {
                // shifts c with overlapping supports; the reachable set is
                // c in (-p^{-j}, 1) with |c|_p bounded by the ball test
                int nmax = j + std::max(fnu.support_exp(), fmu.support_exp() - j);
                int d = std::max(nmax, 0);
                std::int64_t D = ipow(p.value(), d);
                std::int64_t klo = (d >= j) ? -(ipow(p.value(), d - j) - 1) : 0;
                for (std::int64_t k = klo; k < D; ++k) {
                    PRational c{k, d};
                    cplx ip = inner_product(scaled_translate(fmu, j, c), fnu);
                    bool diag = (mu == nu && j == 0 && normalize(p, c).is_zero());
                    double dev = std::abs(ip - (diag ? cplx{1.0, 0.0} : cplx{0.0, 0.0}));
                    if (dev > worst) {
                        worst = dev;
                        wit = "pair (" + std::to_string(mu + 1) + "," +
                              std::to_string(nu + 1) + ") j=" + std::to_string(j) +
                              " c=" + rat_str(p, c);
                    }
                }
            }
            rep.add("orthonormality[" + std::to_string(mu + 1) + "," +
                        std::to_string(nu + 1) + "]",
                    worst, tol, wit);
        }
    }
    return rep;
}

Lemma4Energy lemma4_energy(const TestFunction& psi, int m) {
    if (m < 0) throw std::invalid_argument("lemma4_energy: m < 0");
    if (!is_in_V(psi, m))
        throw std::invalid_argument("lemma4_energy: psi not in V_m");
    Prime p = psi.prime();
    std::int64_t Pm = ipow(p.value(), m);
    Lemma4Energy out;
    out.per_probe.assign(Pm, 0.0);
    if (psi.is_zero()) return out;

    int M = psi.support_exp();
    std::int64_t size = ipow(p.value(), m + M);
    double meas = std::pow(p.value(), -m);  // |c_a|^2 = p^{-m} |psi(rep)|^2
    // Group coefficient energy by the ceiling residue u = ceil(p^m a) mod p^m:
    // the probe at nu collects window u at level j exactly when
    // p^j nu = u (mod p^m), plus the u = 0 window at every level j >= m.
    std::vector<double> E(Pm, 0.0);
    for (std::int64_t v = 0; v < size; ++v) {
        PRational r = index_to_rep(p, v, m, M);
        double c2 = std::norm(psi.evaluate(r)) * meas;
        if (c2 == 0.0) continue;
        std::int64_t u;
        if (v == 0) {
            u = 0;
        } else if (M >= 0) {
            std::int64_t D = ipow(p.value(), M);
            u = (v + D - 1) / D;  // ceil(v / p^M)
        } else {
            u = v * ipow(p.value(), -M);
        }
        if (u >= Pm) u = 0;
        E[u] += c2;
    }
    double tail = std::pow(p.value(), 1 - m) / (p.value() - 1);
    for (std::int64_t nu = 0; nu < Pm; ++nu) {
        double e = tail * E[0];
        double w = 1.0;
        std::int64_t shifted = nu;
        for (int j = 0; j < m; ++j) {
            e += w * E[shifted];
            w /= p.value();
            shifted = shifted * p.value() % Pm;
        }
        out.per_probe[nu] = e;
        out.total += e;
    }
    return out;
}

double lemma4_energy_bruteforce(const TestFunction& psi, int m, int J) {
    if (m < 0) throw std::invalid_argument("lemma4_energy_bruteforce: m < 0");
    if (!is_in_V(psi, m))
        throw std::invalid_argument("lemma4_energy_bruteforce: psi not in V_m");
    Prime p = psi.prime();
    TestFunction phi = haar_phi(p);
    std::int64_t Pm = ipow(p.value(), m);
    int nb = std::max(psi.support_exp(), 0);
    std::int64_t B = ipow(p.value(), nb);
    double total = 0.0;
    for (std::int64_t nu = 0; nu < Pm; ++nu) {
        TestFunction probe = scaled_translate(phi, m, {nu, m});
        for (int j = 0; j <= J; ++j) {
            for (std::int64_t k = 0; k < B; ++k) {
                TestFunction member = scaled_translate(psi, -j, {k, nb});
                total += std::norm(inner_product(probe, member));
            }
        }
    }
    return total;
}

CheckReport parseval_check(const VectorFunction& Psi, int window_exp, double tol) {
    CheckReport ortho = orthonormality_check(Psi, tol);
    if (ortho.verdict == Verdict::fail) return ortho;

    Prime p = Psi.prime();
    int m = Psi.max_scale();
    int sigma = std::max(Psi.max_support_exp() + window_exp, -m);
    int mt = m + sigma;

    CheckReport rep;
    if (mt < 0) {
        rep.add("parseval", 1.0, tol, "components below V_0");
        return rep;
    }

    // coarse closed form per probe, precomputed once per component at the
    // rescaled scale m + sigma
    std::vector<Lemma4Energy> coarse;
    coarse.reserve(Psi.rank());
    for (int i = 0; i < Psi.rank(); ++i)
        coarse.push_back(lemma4_energy(Psi.component(i), mt));

    std::int64_t nprobe = ipow(p.value(), mt);
    double worst = 0.0;
    std::string wit;
    for (std::int64_t v = 0; v < nprobe; ++v) {
        TestFunction probe = coset_probe(p, m, sigma, v);
        PRational r = index_to_rep(p, v, m, sigma);
        double energy = 0.0;
        for (int i = 0; i < Psi.rank(); ++i) {
            energy += coarse[i].per_probe[v];
            const TestFunction& psi = Psi.component(i);
            int Mi = psi.support_exp();
            for (int L = -sigma + 1; L < m + Mi; ++L) {
                PRational c0 = mul_pow(p, r, -L);
                int s = std::max(Mi, L - m);
                for (PRational b : nearby_shifts(p, c0, s))
                    energy += std::norm(
                        inner_product(probe, scaled_translate(psi, L, b)));
            }
        }
        double dev = std::abs(energy - 1.0);
        if (dev > worst) {
            worst = dev;
            wit = "probe " + rat_str(p, r) + " energy " + std::to_string(energy);
        }
    }
    rep.add("parseval", worst, tol, wit);
    return rep;
}

int wpart_span_dimension(const VectorFunction& Psi, int k,
                         const std::vector<int>& subset) {
    Prime p = Psi.prime();
    std::vector<TestFunction> parts;
    for (int i : subset) {
        if (i < 0 || i >= Psi.rank())
            throw std::out_of_range("wpart_span_dimension: bad index");
        parts.push_back(w_part(Psi.component(i), k));
    }
    int mc = 0, Mc = 0;
    bool any = false;
    for (const auto& f : parts) {
        if (f.is_zero()) continue;
        mc = any ? std::max(mc, f.scale()) : f.scale();
        Mc = any ? std::max(Mc, f.support_exp()) : f.support_exp();
        any = true;
    }
    if (!any) return 0;
    std::int64_t size = ipow(p.value(), mc + Mc);
    Mat A(size, static_cast<Eigen::Index>(parts.size()));
    double w = std::pow(p.value(), -mc / 2.0);
    for (std::size_t c = 0; c < parts.size(); ++c)
        for (std::int64_t v = 0; v < size; ++v)
            A(v, c) = parts[c].evaluate(index_to_rep(p, v, mc, Mc)) * w;
    return numerical_rank(A);
}

CheckReport rank_bound_check(const VectorFunction& Psi) {
    Prime p = Psi.prime();
    int m = Psi.max_scale();
    double bound = (p.value() - 1) * std::pow(p.value(), m - 1.0);
    CheckReport rep;
    double dev = std::max(0.0, Psi.rank() - bound);
    rep.add("rank-bound", dev, kTol,
            "rank " + std::to_string(Psi.rank()) + " vs (p-1)p^{m-1} with m=" +
                std::to_string(m));
    return rep;
}

std::string write_pwv(const VectorFunction& Psi) {
    nlohmann::json j;
    j["format"] = "pwv-1";
    j["p"] = Psi.prime().value();
    auto arr = nlohmann::json::array();
    for (const auto& f : Psi.components())
        arr.push_back(nlohmann::json::parse(write_pwf(f)));
    j["components"] = std::move(arr);
    return j.dump(2) + "\n";
}

VectorFunction read_pwv(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "pwv-1")
        throw std::runtime_error("pwv: bad format tag");
    Prime p(j.at("p").get<int>());
    std::vector<TestFunction> comps;
    for (const auto& e : j.at("components")) comps.push_back(read_pwf(e.dump()));
    return VectorFunction(p, std::move(comps));
}

}  // namespace pwav

// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pwav/pipeline.hpp"

using namespace pwav;

namespace {

int g_failures = 0;

void report(int n, const std::string& what, bool ok, const std::string& detail) {
    std::printf("%s: criterion %d — %s%s%s\n", ok ? "PASS" : "FAIL", n,
                what.c_str(), detail.empty() ? "" : " — ", detail.c_str());
    if (!ok) ++g_failures;
}

TestFunction random_fn(Prime p, int m, int M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::map<std::int64_t, cplx> c;
    std::int64_t n = ipow(p.value(), m + M);
    for (std::int64_t v = 0; v < n; ++v) c[v] = {u(rng), u(rng)};
    return TestFunction(p, m, M, std::move(c));
}

// 1. Haar verification for p in {2,3,5}: battery + reduction back to Theta.
void criterion1() {
    bool ok = true;
    std::string detail;
    for (int pv : {2, 3, 5}) {
        Prime p(pv);
        VectorFunction Th = basic_haar(p);
        VerifyOutcome v = verify_pipeline(Th);
        if (v.exit_code != kExitProven) {
            ok = false;
            detail = "p=" + std::to_string(pv) + " verify exit " +
                     std::to_string(v.exit_code);
            break;
        }
        auto [end, chain] = reduce_to_haar(Th);
        if (!verify_chain(chain).passed()) {
            ok = false;
            detail = "p=" + std::to_string(pv) + " chain replay failed";
            break;
        }
        // end equals Theta up to component permutation, deviation <= 1e-9
        for (int i = 0; i < end.rank() && ok; ++i) {
            double best = 1.0;
            for (int j = 0; j < Th.rank(); ++j)
                best = std::min(best,
                                max_coeff_diff(end.component(i), Th.component(j)));
            if (best > 1e-9) {
                ok = false;
                detail = "p=" + std::to_string(pv) + " end component " +
                         std::to_string(i) + " off by " + std::to_string(best);
            }
        }
        if (!ok) break;
    }
    report(1, "Haar bases verify and reduce back to the basic tuple", ok, detail);
}

// 2. Closed-form shell energy vs brute-force truncated sum on 50 random
//    functions (p in {2,3}, m <= 3, M <= 2).
void criterion2() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 50 && ok; ++t) {
        int pv = (t % 2 == 0) ? 2 : 3;
        Prime p(pv);
        int m = 1 + static_cast<int>(rng() % 3);   // 1..3
        int M = static_cast<int>(rng() % 3);       // 0..2
        TestFunction psi = random_fn(p, m, M, rng);
        Lemma4Energy closed = lemma4_energy(psi, m);
        // truncation depth: 40 for p=2; 25 for p=3 keeps p^J within int64,
        // and the geometric tail stays under the allowed budget
        int J = pv == 2 ? 40 : 25;
        double brute = lemma4_energy_bruteforce(psi, m, J);
        double budget =
            std::pow(pv, -40.0) * closed.total + 1e-9 +
            (pv == 3 ? std::pow(3.0, -25.0) * closed.total : 0.0);
        double dev = std::abs(closed.total - brute);
        if (dev > budget) {
            ok = false;
            detail = "trial " + std::to_string(t) + " deviation " +
                     std::to_string(dev);
        }
    }
    report(2, "closed-form shell energy matches the brute-force sum (50 trials)",
           ok, detail);
}

// 3. The worked rank-3 and rank-4 example tuples verify, are not standard
//    Haar themselves, and reduce with rank traces ending at 1.
void criterion3() {
    bool ok = true;
    std::string detail;
    for (Example33Stage st :
         {Example33Stage::mixed_triple, Example33Stage::extended}) {
        VectorFunction Psi = example_3_3(st);
        VerifyOutcome v = verify_pipeline(Psi);
        if (v.exit_code != kExitProven) {
            ok = false;
            detail = "stage verify exit " + std::to_string(v.exit_code);
            break;
        }
        if (v.rank_trace.empty() || v.rank_trace.back() != 1) {
            ok = false;
            detail = "rank trace does not end at 1";
            break;
        }
    }
    if (ok && is_standard_haar(example_3_3(Example33Stage::extended))) {
        ok = false;
        detail = "rank-4 tuple wrongly accepted as standard Haar";
    }
    report(3, "worked example tuples verify and reduce to rank 1", ok, detail);
}

// 4. The rank-4 counterexample tuple: eigen relations, the h-function
//    orthogonality, full verification, span dimension 3, and the
//    reducibility obstruction.
void criterion4() {
    bool ok = true;
    std::string detail;
    Theorem3Construction t3 = theorem3_counterexample();
    const TestFunction& f0 = t3.parts.at("f0");
    const TestFunction& f1 = t3.parts.at("f1");

    auto eig_dev = [](const TestFunction& f, cplx lam) {
        TestFunction d =
            linear_combine({1.0, -lam}, {translate_by_one(f), f});
        return d.norm();
    };
    double worst = std::max(eig_dev(f0, {0, 1}), eig_dev(f1, {0, -1}));
    for (int k = 0; k < 4; ++k)
        worst = std::max(worst, eig_dev(t3.parts.at("g" + std::to_string(k)),
                                        root_of_unity(3 + 4 * k, 16)));
    if (worst > 1e-12) {
        ok = false;
        detail = "eigen relation deviation " + std::to_string(worst);
    }
    double hh =
        std::abs(inner_product(t3.parts.at("h0"), t3.parts.at("h1")));
    if (ok && hh > 1e-12) {
        ok = false;
        detail = "<h0,h1> = " + std::to_string(hh);
    }
    if (ok && verify_pipeline(t3.Psi).exit_code != kExitProven) {
        ok = false;
        detail = "tuple does not verify";
    }
    if (ok && wpart_span_dimension(t3.Psi, 3, {0, 1, 2}) != 3) {
        ok = false;
        detail = "span dimension != 3";
    }
    if (ok) {
        ObstructionReport rep = reducibility_obstruction(t3.Psi);
        if (!rep.obstructed || rep.dimension != 3) {
            ok = false;
            detail = "obstruction not reported";
        }
    }
    report(4, "counterexample tuple: identities, verification, obstruction", ok,
           detail);
}

// 5. 20 random nonzero functions of scale <= 0 are all refuted.
void criterion5() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(555);
    for (int t = 0; t < 20 && ok; ++t) {
        Prime p(t % 2 == 0 ? 2 : 3);
        int M = static_cast<int>(rng() % 3);
        TestFunction psi = random_fn(p, 0, M, rng);
        VerifyOutcome v = verify_pipeline(VectorFunction(p, {psi}));
        bool refuted = v.exit_code == kExitRefuted &&
                       (v.zero_mean.verdict == Verdict::fail ||
                        v.orthonormality.verdict == Verdict::fail);
        if (!refuted) {
            ok = false;
            detail = "trial " + std::to_string(t) + " exit " +
                     std::to_string(v.exit_code);
        }
    }
    report(5, "scale-0 candidates are refuted (20 trials)", ok, detail);
}

// 6. 30 seeded damaged bases (p in {2,3}) verify and reduce to the basic
//    rank with the expected translation eigenvalues.
void criterion6() {
    bool ok = true;
    std::string detail;
    int trial = 0;
    for (int pv : {2, 3}) {
        Prime p(pv);
        for (std::uint64_t seed = 1; seed <= 15 && ok; ++seed, ++trial) {
            int steps = 2 + static_cast<int>(seed % 2);
            auto [psi, dchain] = random_damaged(p, steps, seed);
            if (psi.rank() % (pv - 1) != 0) {
                ok = false;
                detail = "rank divisibility broken at trial " +
                         std::to_string(trial);
                break;
            }
            VerifyOutcome v = verify_pipeline(psi);
            if (v.exit_code != kExitProven) {
                ok = false;
                detail = "verify exit " + std::to_string(v.exit_code) +
                         " at p=" + std::to_string(pv) + " seed " +
                         std::to_string(seed);
                break;
            }
            auto [end, chain] = reduce_to_haar(psi);
            if (end.rank() != pv - 1) {
                ok = false;
                detail = "end rank " + std::to_string(end.rank());
                break;
            }
            for (int mu = 1; mu < pv && ok; ++mu) {
                auto ev = translation_eigenvalue(end.component(mu - 1));
                if (!ev ||
                    std::abs(*ev - std::conj(root_of_unity(mu, pv))) > 1e-9) {
                    ok = false;
                    detail = "eigenvalue mismatch at mu=" + std::to_string(mu);
                }
            }
        }
        if (!ok) break;
    }
    report(6, "damaged bases verify and reduce to the basic rank (30 trials)",
           ok, detail);
}

// 7. Negative controls all produce concrete failures.
void criterion7() {
    bool ok = true;
    std::string detail;
    Prime p3(3);
    VectorFunction Th = basic_haar(p3);

    // (a) one component scaled by 0.9
    VectorFunction scaled(
        p3, {linear_combine({0.9}, {Th.component(0)}), Th.component(1)});
    VerifyOutcome va = verify_pipeline(scaled);
    if (va.exit_code != kExitRefuted || va.witness.empty()) {
        ok = false;
        detail = "scaled control exit " + std::to_string(va.exit_code);
    }

    // (b) deleted component of the p=3 tuple
    if (ok) {
        VectorFunction deleted(p3, {Th.component(0)});
        VerifyOutcome vb = verify_pipeline(deleted);
        if (vb.exit_code != kExitRefuted || vb.witness.empty()) {
            ok = false;
            detail = "deleted control exit " + std::to_string(vb.exit_code);
        }
    }

    // (c) corrupted certificate matrix entry
    if (ok) {
        auto [psi, dchain] = random_damaged(Prime(2), 4, 9);
        auto [end, chain] = reduce_to_haar(psi);
        bool corrupted = false;
        for (ReductionStep& st : chain.steps)
            if (auto* u = std::get_if<ReductionStep::Unitary>(&st.op)) {
                u->U(0, 0) += 0.05;
                corrupted = true;
                break;
            }
        CheckReport rep = verify_chain(chain);
        bool found = false;
        for (const CheckItem& it : rep.items)
            if (it.deviation > it.tolerance &&
                it.name.rfind("step ", 0) == 0)
                found = true;
        if (!corrupted || rep.passed() || !found) {
            ok = false;
            detail = "certificate corruption not pinned to a step";
        }
    }
    report(7, "negative controls are refuted with witnesses", ok, detail);
}

// 8. Calculus round trips on 100 random test functions.
void criterion8() {
    bool ok = true;
    std::string detail;
    std::mt19937_64 rng(88);
    for (int t = 0; t < 100 && ok; ++t) {
        Prime p(t % 2 == 0 ? 2 : 3);
        int m = static_cast<int>(rng() % 3);
        int M = static_cast<int>(rng() % 3);
        if (m + M == 0) m = 1;
        TestFunction f = random_fn(p, m, M, rng);
        TestFunction g = random_fn(p, m, M, rng);

        double plancherel = std::abs(inner_product(f, g) -
                                     inner_product(fourier(f), fourier(g)));
        if (plancherel > 1e-9) {
            ok = false;
            detail = "Plancherel deviation " + std::to_string(plancherel);
            break;
        }
        if (!approx_equal(fourier_inverse(fourier(f)), f, 1e-9)) {
            ok = false;
            detail = "double-transform mismatch at trial " + std::to_string(t);
            break;
        }
        TestFunction back = read_pwf(write_pwf(f));
        if (back.scale() != f.scale() || back.support_exp() != f.support_exp() ||
            back.coeffs() != f.coeffs()) {
            ok = false;
            detail = "serialization not bit-exact at trial " + std::to_string(t);
            break;
        }
        // eigen decomposition reconstruction
        std::int64_t P = ipow(p.value(), m);
        std::vector<TestFunction> projs;
        std::vector<cplx> ones;
        for (std::int64_t l = 0; l < P; ++l) {
            projs.push_back(eigen_project(f, l, m));
            ones.emplace_back(1.0, 0.0);
        }
        if (max_coeff_diff(linear_combine(ones, projs), f) > 1e-12) {
            ok = false;
            detail = "eigen decomposition reconstruction at trial " +
                     std::to_string(t);
            break;
        }
    }
    report(8, "calculus round trips on 100 random functions", ok, detail);
}

// 9. DFT matrices are unitary to 1e-12 for p in {2,3,5}, n in {1,2}.
void criterion9() {
    bool ok = true;
    std::string detail;
    for (int pv : {2, 3, 5})
        for (int n : {1, 2}) {
            double dev = unitarity_deviation(dft_matrix(pv, n));
            if (dev > 1e-12) {
                ok = false;
                detail = "p=" + std::to_string(pv) + " n=" + std::to_string(n) +
                         " deviation " + std::to_string(dev);
            }
        }
    report(9, "DFT matrices unitary to 1e-12", ok, detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures) {
        std::printf("ACCEPTANCE: %d criteria FAILED\n", g_failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all 9 criteria passed\n");
    return 0;
}

#include "pwav/reduce.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pwav/construct.hpp"

namespace pwav {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec phase_normalized(Vec v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-7) {
            v *= std::abs(v(i)) / v(i);
            break;
        }
    }
    return v;
}

/// Nearest k with lambda ~ e^{-2 pi i k/N}; throws out of tolerance.
std::int64_t snap_root_label(cplx lambda, std::int64_t N, const char* what) {
    double t = -std::arg(lambda) / kTwoPi * static_cast<double>(N);
    std::int64_t k = std::llround(t);
    k = ((k % N) + N) % N;
    double dist = std::abs(lambda - std::conj(root_of_unity(k, N)));
    if (dist > 100 * kTol)
        throw RefutationError(std::string(what) +
                              ": eigenvalue is not a root of unity of order " +
                              std::to_string(N) + " (distance " +
                              std::to_string(dist) + ")");
    return k;
}

/// r <= (p-1) p^{m-1}, compared exactly; m <= 0 makes the bound < 1.
bool within_rank_bound(int r, int p, int m) {
    if (m < 1) return false;
    return static_cast<std::int64_t>(r) <= (p - 1) * ipow(p, m - 1);
}

VectorFunction replace_with_split(const VectorFunction& Psi, int i, int n) {
    if (i < 0 || i >= Psi.rank())
        throw std::invalid_argument("split step: bad component index");
    std::vector<TestFunction> comps = Psi.components();
    std::vector<TestFunction> pieces = split(comps[i], n);
    comps.erase(comps.begin() + i);
    comps.insert(comps.begin() + i, pieces.begin(), pieces.end());
    return VectorFunction(Psi.prime(), std::move(comps));
}

VectorFunction apply_regroup(const VectorFunction& Psi, int m,
                             const std::vector<std::int64_t>& labels) {
    Prime p = Psi.prime();
    if (static_cast<int>(labels.size()) != Psi.rank())
        throw std::invalid_argument("regroup: label count mismatch");
    double scale = std::pow(p.value(), (1.0 - m) / 2.0);
    std::vector<TestFunction> out;
    for (int mu = 1; mu < p.value(); ++mu) {
        std::vector<TestFunction> terms;
        std::vector<cplx> coeffs;
        for (int nu = 0; nu < Psi.rank(); ++nu) {
            if (labels[nu] % p.value() != mu) continue;
            terms.push_back(scaled_translate(Psi.component(nu), 1 - m, {0, 0}));
            coeffs.push_back(scale);
        }
        if (terms.empty())
            throw std::invalid_argument("regroup: empty group T_" +
                                        std::to_string(mu));
        out.push_back(linear_combine(coeffs, terms));
    }
    return VectorFunction(p, std::move(out));
}

nlohmann::json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

cplx json_cplx(const nlohmann::json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

VectorFunction apply_step(const VectorFunction& Psi, const ReductionStep& step) {
    if (const auto* u = std::get_if<ReductionStep::Unitary>(&step.op))
        return unitary_mix(Psi, u->U);
    if (const auto* s = std::get_if<ReductionStep::Split>(&step.op))
        return replace_with_split(Psi, s->component, s->n);
    if (const auto* g = std::get_if<ReductionStep::Regroup>(&step.op))
        return apply_regroup(Psi, g->m, g->labels);
    const auto& mg = std::get<ReductionStep::Merge>(step.op);
    if (static_cast<int>(mg.components.size()) != Psi.prime().value())
        throw std::invalid_argument("merge step: need p source components");
    std::vector<TestFunction> fs;
    for (int i : mg.components) {
        if (i < 0 || i >= Psi.rank())
            throw std::invalid_argument("merge step: bad component index");
        fs.push_back(Psi.component(i));
    }
    auto merged = merge(fs);
    if (!merged) throw std::invalid_argument("merge step: pieces do not merge");
    std::vector<TestFunction> comps = Psi.components();
    std::vector<int> order = mg.components;
    std::sort(order.rbegin(), order.rend());
    for (int i : order) comps.erase(comps.begin() + i);
    if (mg.position < 0 || mg.position > static_cast<int>(comps.size()))
        throw std::invalid_argument("merge step: bad position");
    comps.insert(comps.begin() + mg.position, *merged);
    return VectorFunction(Psi.prime(), std::move(comps));
}

std::optional<Vec> find_lower_combo(const VectorFunction& Psi, int m) {
    Prime p = Psi.prime();
    int r = Psi.rank();
    std::vector<TestFunction> resid;
    int Mc = 0;
    bool any = false;
    for (int i = 0; i < r; ++i) {
        const TestFunction& f = Psi.component(i);
        if (!is_in_V(f, m))
            throw std::invalid_argument("find_lower_combo: component outside V_m");
        TestFunction w =
            linear_combine({1.0, -1.0}, {f, project_V(f, m - 1)});
        if (!w.is_zero()) {
            Mc = any ? std::max(Mc, w.support_exp()) : w.support_exp();
            any = true;
        }
        resid.push_back(std::move(w));
    }
    if (!any) return phase_normalized(Vec::Unit(r, 0));

    Mc = std::max(Mc, -m);
    std::int64_t rows = ipow(p.value(), m + Mc);
    Mat A(rows, r);
    double wgt = std::pow(p.value(), -m / 2.0);
    for (int c = 0; c < r; ++c)
        for (std::int64_t v = 0; v < rows; ++v)
            A(v, c) = resid[c].evaluate(index_to_rep(p, v, m, Mc)) * wgt;

    SvdInfo si = svd_info(A);
    if (si.sv.front() <= kRankTol) return phase_normalized(Vec::Unit(r, 0));
    if (si.sv.back() > kRankTol * si.sv.front()) return std::nullopt;
    return phase_normalized(si.smallest_right);
}

VectorFunction prop7_step(const VectorFunction& Psi, const Vec& alpha,
                          std::vector<ReductionStep>* steps) {
    int m = Psi.max_scale();
    std::vector<cplx> coeffs(alpha.data(), alpha.data() + alpha.size());
    TestFunction combo = linear_combine(coeffs, Psi.components());
    TestFunction resid =
        linear_combine({1.0, -1.0}, {combo, project_V(combo, m - 1)});
    if (resid.norm() > 10 * kTol)
        throw std::invalid_argument(
            "prop7_step: alpha is not a kernel vector (residual " +
            std::to_string(resid.norm()) + ")");

    Mat U = unitary_with_first_row(alpha);
    VectorFunction mixed = unitary_mix(Psi, U);
    VectorFunction out = replace_with_split(mixed, 0, 1);
    if (steps) {
        steps->push_back({ReductionStep::Unitary{U}});
        steps->push_back({ReductionStep::Split{0, 1}});
    }
    return out;
}

Mat solve_A0(const VectorFunction& Psi) {
    int r = Psi.rank();
    Mat G(r, r), C(r, r);
    std::vector<TestFunction> shifted;
    for (int i = 0; i < r; ++i) shifted.push_back(translate_by_one(Psi.component(i)));
    for (int nu = 0; nu < r; ++nu)
        for (int k = 0; k < r; ++k) {
            G(nu, k) = inner_product(Psi.component(nu), Psi.component(k));
            C(nu, k) = inner_product(shifted[nu], Psi.component(k));
        }
    if (numerical_rank(G) < r)
        throw std::invalid_argument("solve_A0: components are linearly dependent");
    Mat A0 = G.transpose().fullPivLu().solve(C.transpose()).transpose();

    double worst = 0.0;
    for (int mu = 0; mu < r; ++mu) {
        std::vector<cplx> coeffs = {1.0};
        std::vector<TestFunction> terms = {shifted[mu]};
        for (int nu = 0; nu < r; ++nu) {
            coeffs.push_back(-A0(mu, nu));
            terms.push_back(Psi.component(nu));
        }
        worst = std::max(worst, linear_combine(coeffs, terms).norm());
    }
    if (worst > 10 * kTol)
        throw RefutationError(
            "solve_A0: translate leaves the component span (residual " +
            std::to_string(worst) + ")");
    if (worst > kTol)
        throw InconclusiveError("solve_A0: marginal reconstruction residual " +
                                std::to_string(worst));
    return A0;
}

VectorFunction prop10_step(const VectorFunction& Psi, int m,
                           std::vector<ReductionStep>* steps) {
    if (m < 1) throw std::invalid_argument("prop10_step: m must be >= 1");
    Prime p = Psi.prime();
    Mat A0 = solve_A0(Psi);
    // the unitarity of the translation action presumes an orthonormal
    // system: fold the Gram deviation from I into the same verdict
    double ud = unitarity_deviation(A0);
    for (int a = 0; a < Psi.rank(); ++a)
        for (int b = 0; b < Psi.rank(); ++b)
            ud = std::max(ud,
                          std::abs(inner_product(Psi.component(a),
                                                 Psi.component(b)) -
                                   (a == b ? 1.0 : 0.0)));
    if (ud > 10 * kTol)
        throw RefutationError("prop10_step: unitarity failure (deviation " +
                              std::to_string(ud) + ")");
    if (ud > kTol)
        throw InconclusiveError("prop10_step: marginal unitarity deviation " +
                                std::to_string(ud));

    std::int64_t N = ipow(p.value(), m);
    EigenDecomp ed = diagonalize_normal(A0);
    for (cplx lam : ed.lambda) (void)snap_root_label(lam, N, "prop10_step");

    Mat V = ed.Q.adjoint();
    VectorFunction out = unitary_mix(Psi, V);
    if (steps) steps->push_back({ReductionStep::Unitary{V}});

    for (int i = 0; i < out.rank(); ++i) {
        const TestFunction& f = out.component(i);
        std::int64_t k = snap_root_label(ed.lambda[i], N, "prop10_step");
        cplx lam = std::conj(root_of_unity(k, N));
        TestFunction diff = linear_combine({1.0, -lam}, {translate_by_one(f), f});
        if (diff.norm() > 10 * kTol)
            throw RefutationError("prop10_step: eigen residual " +
                                  std::to_string(diff.norm()) + " at component " +
                                  std::to_string(i + 1));
        double wd = max_coeff_diff(w_part(f, m - 1), f);
        if (wd > 10 * kTol)
            throw RefutationError("prop10_step: component " + std::to_string(i + 1) +
                                  " is not in W_{m-1} (deviation " +
                                  std::to_string(wd) + ")");
    }
    return out;
}

EigenClassification classify_eigen(const VectorFunction& Psi, int m) {
    if (m < 1) throw std::invalid_argument("classify_eigen: m must be >= 1");
    Prime p = Psi.prime();
    std::int64_t N = ipow(p.value(), m);
    std::int64_t expect = static_cast<std::int64_t>(p.value() - 1) *
                          ipow(p.value(), m - 1);
    if (Psi.rank() != expect)
        throw RefutationError("classify_eigen: rank " + std::to_string(Psi.rank()) +
                              " != (p-1)p^{m-1} = " + std::to_string(expect));

    EigenClassification cls;
    cls.m = m;
    for (int i = 0; i < Psi.rank(); ++i) {
        auto ev = translation_eigenvalue(Psi.component(i));
        if (!ev)
            throw RefutationError("classify_eigen: component " +
                                  std::to_string(i + 1) +
                                  " is not a translation eigenfunction");
        std::int64_t l = snap_root_label(*ev, N, "classify_eigen");
        if (l % p.value() == 0)
            throw RefutationError("classify_eigen: label " + std::to_string(l) +
                                  " of component " + std::to_string(i + 1) +
                                  " is divisible by p");
        cls.labels.push_back(l);
    }
    std::vector<std::int64_t> sorted = cls.labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw RefutationError("classify_eigen: repeated label (F not bijective)");

    cls.groups.assign(p.value() - 1, {});
    for (int i = 0; i < Psi.rank(); ++i)
        cls.groups[cls.labels[i] % p.value() - 1].push_back(i);
    std::int64_t gsize = ipow(p.value(), m - 1);
    for (const auto& g : cls.groups)
        if (static_cast<std::int64_t>(g.size()) != gsize)
            throw RefutationError("classify_eigen: group size mismatch");
    return cls;
}

VectorFunction prop11_regroup(const VectorFunction& Psi,
                              const EigenClassification& cls,
                              std::vector<ReductionStep>* steps) {
    VectorFunction out = apply_regroup(Psi, cls.m, cls.labels);
    Prime p = Psi.prime();
    for (int mu = 1; mu < p.value(); ++mu) {
        const TestFunction& f = out.component(mu - 1);
        if (std::abs(f.norm() - 1.0) > 10 * kTol)
            throw RefutationError("prop11_regroup: ||f^(" + std::to_string(mu) +
                                  ")|| = " + std::to_string(f.norm()));
        if (max_coeff_diff(w_part(f, 0), f) > 10 * kTol)
            throw RefutationError("prop11_regroup: f^(" + std::to_string(mu) +
                                  ") is not in W_0");
        auto ev = translation_eigenvalue(f);
        if (!ev || std::abs(*ev - std::conj(root_of_unity(mu, p.value()))) > 10 * kTol)
            throw RefutationError("prop11_regroup: wrong eigenvalue for f^(" +
                                  std::to_string(mu) + ")");
    }
    if (steps) steps->push_back({ReductionStep::Regroup{cls.m, cls.labels}});
    return out;
}

std::pair<VectorFunction, EquivalenceChain> reduce_to_haar(
    const VectorFunction& Psi) {
    Prime p = Psi.prime();
    EquivalenceChain chain{Psi, {}, Psi};
    VectorFunction cur = Psi;

    try {
        int m = cur.max_scale();
        if (cur.rank() % (p.value() - 1) != 0)
            throw RefutationError("rank " + std::to_string(cur.rank()) +
                                  " is not divisible by p-1");
        if (!within_rank_bound(cur.rank(), p.value(), m))
            throw RefutationError("rank " + std::to_string(cur.rank()) +
                                  " exceeds (p-1)p^{m-1} with m = " +
                                  std::to_string(m));
        // Termination: each pass adds p-1 to the rank, which stays under
        // the rank bound (p-1)p^{m-1}, so the loop count is bounded a priori.
        std::int64_t guard =
            ((p.value() - 1) * ipow(p.value(), std::max(m, 1) - 1) - cur.rank()) /
                (p.value() - 1) +
            1;
        for (std::int64_t it = 0;; ++it) {
            m = cur.max_scale();
            auto alpha = find_lower_combo(cur, m);
            if (!alpha) break;
            if (it >= guard)
                throw RefutationError("reduction loop exceeded its rank budget");
            cur = prop7_step(cur, *alpha, &chain.steps);
            if (!within_rank_bound(cur.rank(), p.value(), cur.max_scale()))
                throw RefutationError("rank " + std::to_string(cur.rank()) +
                                      " exceeds (p-1)p^{m-1} after a lift step");
        }
        m = cur.max_scale();
        cur = prop10_step(cur, m, &chain.steps);
        EigenClassification cls = classify_eigen(cur, m);
        cur = prop11_regroup(cur, cls, &chain.steps);
        if (!is_standard_haar(cur))
            throw RefutationError("final vector function is not standard Haar");
    } catch (const std::invalid_argument& e) {
        // structural degeneracy (zero/dependent components) on the engine's
        // deterministic path refutes the orthonormal-basis hypothesis
        throw RefutationError(std::string("degenerate step: ") + e.what());
    }
    chain.end = cur;
    return {cur, chain};
}

HaarCoordinates haar_coordinates(const VectorFunction& Psi) {
    Prime p = Psi.prime();
    int r = p.value() - 1;
    if (Psi.rank() != r)
        throw std::invalid_argument("haar_coordinates: rank must be p-1");
    for (int i = 0; i < r; ++i)
        if (max_coeff_diff(w_part(Psi.component(i), 0), Psi.component(i)) >
            10 * kTol)
            throw std::invalid_argument("haar_coordinates: component " +
                                        std::to_string(i + 1) + " is not in W_0");

    int n = 0;
    for (int i = 0; i < r; ++i)
        n = std::max(n, Psi.component(i).support_exp());
    std::int64_t P = ipow(p.value(), n);
    VectorFunction Theta = basic_haar(p);

    HaarCoordinates out;
    out.n = n;
    for (int mu = 0; mu < r; ++mu) {
        Mat cm(r, P);
        std::vector<cplx> coeffs = {1.0};
        std::vector<TestFunction> terms = {Psi.component(mu)};
        for (int nu = 0; nu < r; ++nu)
            for (std::int64_t k = 0; k < P; ++k) {
                TestFunction t = scaled_translate(Theta.component(nu), 0, {k, n});
                cm(nu, k) = inner_product(Psi.component(mu), t);
                coeffs.push_back(-cm(nu, k));
                terms.push_back(std::move(t));
            }
        if (linear_combine(coeffs, terms).norm() > 1e-6)
            throw std::invalid_argument(
                "haar_coordinates: component does not expand over the theta "
                "translates");
        out.c.push_back(std::move(cm));
    }

    // U realizes Psi' = U Theta' on the rank (p-1)p^n refinements, with the
    // translate wrap theta_{n,(k+p^n)/p^n} = chi_p(-nu/p) theta_{n,k/p^n}
    Mat U = Mat::Zero(r * P, r * P);
    for (int mu = 0; mu < r; ++mu)
        for (std::int64_t l = 0; l < P; ++l)
            for (int nu = 0; nu < r; ++nu)
                for (std::int64_t k = 0; k < P; ++k) {
                    std::int64_t kk = k + l;
                    cplx factor = 1.0;
                    if (kk >= P) {
                        kk -= P;
                        factor = character(p, {-(nu + 1), 1});
                    }
                    U(mu * P + l, nu * P + kk) += out.c[mu](nu, k) * factor;
                }
    out.U = std::move(U);
    out.unitary = is_unitary(out.U, 10 * kTol);
    return out;
}

bool is_standard_haar(const VectorFunction& Psi) {
    try {
        return haar_coordinates(Psi).unitary;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

CheckReport verify_chain(const EquivalenceChain& chain, double tol) {
    CheckReport rep;
    VectorFunction cur = chain.start;
    for (std::size_t i = 0; i < chain.steps.size(); ++i) {
        const ReductionStep& st = chain.steps[i];
        std::string name = "step " + std::to_string(i + 1);
        try {
            if (const auto* u = std::get_if<ReductionStep::Unitary>(&st.op)) {
                rep.add(name + " (unitary)", unitarity_deviation(u->U), tol);
            } else if (const auto* s = std::get_if<ReductionStep::Split>(&st.op)) {
                // round-trip legality for n = 1 splits
                double dev = 0.0;
                if (s->n == 1) {
                    auto back = merge(split(cur.component(s->component), 1));
                    dev = back ? max_coeff_diff(*back, cur.component(s->component))
                               : 1.0;
                }
                rep.add(name + " (split)", dev, tol);
            } else if (const auto* g = std::get_if<ReductionStep::Regroup>(&st.op)) {
                (void)g;
                rep.add(name + " (regroup)", 0.0, tol);
            } else {
                rep.add(name + " (merge)", 0.0, tol);
            }
            cur = apply_step(cur, st);
        } catch (const std::exception& e) {
            rep.add(name + " (replay)", 1.0, tol, e.what());
            return rep;
        }
    }
    double dev = 0.0;
    std::string wit;
    if (cur.rank() != chain.end.rank()) {
        dev = 1.0;
        wit = "rank mismatch";
    } else {
        for (int i = 0; i < cur.rank(); ++i)
            dev = std::max(dev,
                           max_coeff_diff(cur.component(i), chain.end.component(i)));
    }
    rep.add("end match", dev, tol, wit);
    return rep;
}

ObstructionReport reducibility_obstruction(const VectorFunction& Psi) {
    if (Psi.prime().value() != 2 || Psi.rank() != 4)
        throw std::invalid_argument(
            "reducibility_obstruction: needs p = 2 and rank 4");
    std::vector<int> deep;
    int shallow = 0;
    for (int i = 0; i < 4; ++i) {
        int m = Psi.component(i).scale();
        if (m == 4)
            deep.push_back(i);
        else if (m <= 3)
            ++shallow;
        else
            throw std::invalid_argument(
                "reducibility_obstruction: component outside V_4");
    }
    if (deep.size() != 3 || shallow != 1)
        throw std::invalid_argument(
            "reducibility_obstruction: need three components in V_4 \\ V_3 and "
            "one in V_3");
    ObstructionReport out;
    out.dimension = wpart_span_dimension(Psi, 3, deep);
    out.obstructed = out.dimension >= 3;
    out.detail = out.obstructed
                     ? "W_3-parts of the V_4 components span dimension 3; any "
                       "reduction chain forces dimension <= 2, so reduction to a "
                       "standard Haar vector function is impossible"
                     : "W_3-part span dimension <= 2; no obstruction detected";
    return out;
}

std::string write_pwcert(const EquivalenceChain& chain) {
    nlohmann::json j;
    j["format"] = "pwcert-1";
    j["start"] = nlohmann::json::parse(write_pwv(chain.start));
    j["end"] = nlohmann::json::parse(write_pwv(chain.end));
    auto steps = nlohmann::json::array();
    for (const ReductionStep& st : chain.steps) {
        nlohmann::json js;
        if (const auto* u = std::get_if<ReductionStep::Unitary>(&st.op)) {
            js["kind"] = "unitary";
            auto rows = nlohmann::json::array();
            for (Eigen::Index a = 0; a < u->U.rows(); ++a) {
                auto row = nlohmann::json::array();
                for (Eigen::Index b = 0; b < u->U.cols(); ++b)
                    row.push_back(cplx_json(u->U(a, b)));
                rows.push_back(std::move(row));
            }
            js["matrix"] = std::move(rows);
        } else if (const auto* s = std::get_if<ReductionStep::Split>(&st.op)) {
            js["kind"] = "split";
            js["component"] = s->component;
            js["n"] = s->n;
        } else if (const auto* g = std::get_if<ReductionStep::Regroup>(&st.op)) {
            js["kind"] = "regroup";
            js["m"] = g->m;
            js["labels"] = g->labels;
        } else {
            const auto& mg = std::get<ReductionStep::Merge>(st.op);
            js["kind"] = "merge";
            js["components"] = mg.components;
            js["position"] = mg.position;
        }
        steps.push_back(std::move(js));
    }
    j["steps"] = std::move(steps);
    return j.dump(2) + "\n";
}

EquivalenceChain read_pwcert(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "pwcert-1")
        throw std::runtime_error("pwcert: bad format tag");
    EquivalenceChain chain{read_pwv(j.at("start").dump()),
                           {},
                           read_pwv(j.at("end").dump())};
    for (const auto& js : j.at("steps")) {
        std::string kind = js.at("kind").get<std::string>();
        if (kind == "unitary") {
            const auto& rows = js.at("matrix");
            Mat U(rows.size(), rows.empty() ? 0 : rows.front().size());
            for (Eigen::Index a = 0; a < U.rows(); ++a)
                for (Eigen::Index b = 0; b < U.cols(); ++b)
                    U(a, b) = json_cplx(rows.at(a).at(b));
            chain.steps.push_back({ReductionStep::Unitary{std::move(U)}});
        } else if (kind == "split") {
            chain.steps.push_back({ReductionStep::Split{
                js.at("component").get<int>(), js.at("n").get<int>()}});
        } else if (kind == "regroup") {
            chain.steps.push_back({ReductionStep::Regroup{
                js.at("m").get<int>(),
                js.at("labels").get<std::vector<std::int64_t>>()}});
        } else if (kind == "merge") {
            chain.steps.push_back({ReductionStep::Merge{
                js.at("components").get<std::vector<int>>(),
                js.at("position").get<int>()}});
        } else {
            throw std::runtime_error("pwcert: unknown step kind " + kind);
        }
    }
    return chain;
}

}  // namespace pwav

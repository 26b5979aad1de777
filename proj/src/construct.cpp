#include "pwav/construct.hpp"

#include <cmath>

namespace pwav {

namespace {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }
};

Mat random_unitary(int r, SplitMix64& rng) {
    Mat U = Mat::Identity(r, r);
    if (r == 1) {
        U(0, 0) = std::polar(1.0, 2.0 * M_PI * rng.uniform());
        return U;
    }
    for (int k = 0; k + 1 < r; ++k) {
        double th = 2.0 * M_PI * rng.uniform();
        double ph = 2.0 * M_PI * rng.uniform();
        Mat G = Mat::Identity(r, r);
        G(k, k) = std::cos(th);
        G(k, k + 1) = std::polar(std::sin(th), ph);
        G(k + 1, k) = -std::polar(std::sin(th), -ph);
        G(k + 1, k + 1) = std::cos(th);
        U = G * U;
    }
    return U;
}

}  // namespace

VectorFunction basic_haar(Prime p) {
    std::vector<TestFunction> comps;
    for (std::int64_t nu = 1; nu < p.value(); ++nu) {
        std::map<std::int64_t, cplx> c;
        for (std::int64_t v = 0; v < p.value(); ++v)
            c[v] = root_of_unity(nu * v, p.value());
        comps.emplace_back(p, 1, 0, std::move(c));
    }
    return VectorFunction(p, std::move(comps));
}

std::vector<TestFunction> split(const TestFunction& f, int n) {
    if (n <= 0) throw std::invalid_argument("split: n must be positive");
    std::int64_t count = ipow(f.prime().value(), n);
    std::vector<TestFunction> out;
    out.reserve(count);
    for (std::int64_t k = 0; k < count; ++k)
        out.push_back(scaled_translate(f, n, {k, n}));
    return out;
}

std::optional<TestFunction> merge(const std::vector<TestFunction>& fs) {
    if (fs.empty()) throw std::invalid_argument("merge: empty list");
    Prime p = fs.front().prime();
    if (static_cast<int>(fs.size()) != p.value())
        throw std::invalid_argument("merge: need exactly p pieces");
    TestFunction candidate = scaled_translate(fs.front(), -1, {0, 0});
    std::vector<TestFunction> back = split(candidate, 1);
    for (int k = 0; k < p.value(); ++k)
        if (!approx_equal(back[k], fs[k])) return std::nullopt;
    return candidate;
}

VectorFunction unitary_mix(const VectorFunction& Psi, const Mat& U) {
    int r = Psi.rank();
    if (U.rows() != r || U.cols() != r)
        throw std::invalid_argument("unitary_mix: dimension mismatch");
    if (unitarity_deviation(U) > 10 * kTol)
        throw std::invalid_argument("unitary_mix: matrix is not unitary");
    std::vector<TestFunction> out;
    out.reserve(r);
    for (int i = 0; i < r; ++i) {
        std::vector<cplx> row(r);
        for (int j = 0; j < r; ++j) row[j] = U(i, j);
        out.push_back(linear_combine(row, Psi.components()));
    }
    return VectorFunction(Psi.prime(), std::move(out));
}

VectorFunction example_3_3(Example33Stage stage) {
    Prime p2(2);
    TestFunction psi = basic_haar(p2).component(0);
    if (stage == Example33Stage::base) return VectorFunction(p2, {psi});

    std::vector<TestFunction> s1 = split(psi, 1);  // psi1, psi2
    if (stage == Example33Stage::split_pair) return VectorFunction(p2, s1);

    std::vector<TestFunction> s2 = split(s1[1], 1);  // psi21, psi22
    VectorFunction triple(p2, {s1[0], s2[0], s2[1]});
    if (stage == Example33Stage::split_triple) return triple;

    double r = 1.0 / std::sqrt(2.0);
    Mat M(3, 3);
    M << r, r, 0, r, -r, 0, 0, 0, 1;
    VectorFunction mixed = unitary_mix(triple, M);
    if (stage == Example33Stage::mixed_triple) return mixed;

    std::vector<TestFunction> s3 = split(mixed.component(0), 1);
    return VectorFunction(
        p2, {s3[0], s3[1], mixed.component(1), mixed.component(2)});
}

Theorem3Construction theorem3_counterexample() {
    Prime p2(2);
    TestFunction theta = basic_haar(p2).component(0);

    // f^(k) = (1/sqrt 2) sum_l e^{-2 pi i l(1+2k)/4} theta_{1,l/2}
    std::vector<TestFunction> ts = split(theta, 1);
    double r = 1.0 / std::sqrt(2.0);
    std::vector<TestFunction> f;
    for (int k = 0; k < 2; ++k)
        f.push_back(linear_combine(
            {r, r * root_of_unity(-(1 + 2 * k), 4)}, ts));

    // g^(k) = (1/2) sum_l e^{-2 pi i l(3+4k)/16} f^(1)_{2,l/4}; the
    // translation eigenvalue relation g^(k)(x-1) = e^{2 pi i (3+4k)/16} g^(k)
    // forces the f^(1) pieces with these phases (the wrap factor of f^(1)
    // under x -> x-1 is -i, and -i e^{-2 pi i (3+4k)/4} = 1).
    std::vector<TestFunction> fs = split(f[1], 2);
    std::vector<TestFunction> g;
    for (int k = 0; k < 4; ++k) {
        std::vector<cplx> coeff(4);
        for (int l = 0; l < 4; ++l)
            coeff[l] = 0.5 * root_of_unity(-l * (3 + 4 * k), 16);
        g.push_back(linear_combine(coeff, fs));
    }

    double cs = std::cos(M_PI / 8), sn = std::sin(M_PI / 8);
    double lambda = 1.0 / std::sqrt(1.0 + cs + sn);
    cplx a = lambda, b = lambda * std::sqrt(cs), c = lambda * std::sqrt(sn);

    TestFunction h0 = linear_combine({a, b, c}, {f[0], g[2], g[3]});
    TestFunction h1 = translate_by_one(h0);

    Mat rows(2, 3);
    rows << a, b, c, root_of_unity(4, 16) * a, root_of_unity(11, 16) * b,
        root_of_unity(15, 16) * c;
    Vec third = complete_orthonormal_row(rows);
    Mat U(3, 3);
    U << rows, third.transpose();

    TestFunction h2 =
        linear_combine({third(0), third(1), third(2)}, {f[0], g[2], g[3]});
    TestFunction h = scaled_translate(h0, -1, {0, 0});

    Theorem3Construction out{
        VectorFunction(p2, {g[0], g[1], h2, h}),
        {{"f0", f[0]},
         {"f1", f[1]},
         {"g0", g[0]},
         {"g1", g[1]},
         {"g2", g[2]},
         {"g3", g[3]},
         {"h0", h0},
         {"h1", h1},
         {"h2", h2},
         {"h", h}},
        U};
    return out;
}

std::pair<VectorFunction, EquivalenceChain> random_damaged(Prime p, int steps,
                                                           std::uint64_t seed) {
    if (steps < 0) throw std::invalid_argument("random_damaged: steps < 0");
    VectorFunction Psi = basic_haar(p);
    EquivalenceChain chain{Psi, {}, Psi};
    SplitMix64 rng(seed);
    for (int s = 0; s < steps; ++s) {
        if (rng.next() % 2 == 0) {
            int i = static_cast<int>(rng.next() % Psi.rank());
            std::vector<TestFunction> comps = Psi.components();
            std::vector<TestFunction> pieces = split(comps[i], 1);
            comps.erase(comps.begin() + i);
            comps.insert(comps.begin() + i, pieces.begin(), pieces.end());
            Psi = VectorFunction(p, std::move(comps));
            chain.steps.push_back({ReductionStep::Split{i, 1}});
        } else {
            Mat U = random_unitary(Psi.rank(), rng);
            Psi = unitary_mix(Psi, U);
            chain.steps.push_back({ReductionStep::Unitary{U}});
        }
    }
    chain.end = Psi;
    return {Psi, chain};
}

}  // namespace pwav

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pwav/testfn.hpp"

using namespace pwav;

namespace {

// theta^(nu)(x) = phi(x) chi_p(nu x / p)
TestFunction basic_theta(Prime p, int nu) {
    std::map<std::int64_t, cplx> c;
    for (std::int64_t v = 0; v < p.value(); ++v)
        c[v] = root_of_unity(nu * v % p.value(), p.value());
    return TestFunction(p, 1, 0, std::move(c));
}

TestFunction random_fn(Prime p, int m, int M, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::map<std::int64_t, cplx> c;
    std::int64_t size = ipow(p.value(), m + M);
    for (std::int64_t v = 0; v < size; ++v) c[v] = {u(rng), u(rng)};
    return TestFunction(p, m, M, std::move(c));
}

}  // namespace

TEST_CASE("evaluate") {
    Prime p2(2);
    TestFunction phi = haar_phi(p2);
    CHECK(std::abs(phi.evaluate({0, 0}) - cplx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(phi.evaluate({1, 1})) < 1e-15);  // |1/2|_2 = 2 > 1
    TestFunction theta = basic_theta(p2, 1);
    CHECK(std::abs(theta.evaluate({1, 0}) - cplx{-1.0, 0.0}) < 1e-15);
}

TEST_CASE("linear combine basics") {
    Prime p2(2);
    std::mt19937_64 rng(3);
    TestFunction f = random_fn(p2, 2, 1, rng);
    TestFunction g = random_fn(p2, 1, 0, rng);
    CHECK(approx_equal(linear_combine({{1, 0}, {0, 0}}, {f, g}), f));
    TestFunction z = linear_combine({{1, 0}, {-1, 0}}, {f, f});
    CHECK(z.is_zero());

    // theta^(1) = 2^{-1/2} (phi_{1,0} - phi_{1,1/2})
    TestFunction phi = haar_phi(p2);
    TestFunction a = scaled_translate(phi, 1, {0, 0});
    TestFunction b = scaled_translate(phi, 1, {1, 1});
    double s = 1.0 / std::sqrt(2.0);
    TestFunction theta = linear_combine({{s, 0}, {-s, 0}}, {a, b});
    CHECK(approx_equal(theta, basic_theta(p2, 1)));
}

TEST_CASE("scaled translate") {
    Prime p2(2);
    TestFunction phi = haar_phi(p2);
    CHECK(approx_equal(scaled_translate(phi, 0, {0, 0}), phi));
    // phi_{1,0} = sqrt(2) * indicator of 2 Z_2
    TestFunction f = scaled_translate(phi, 1, {0, 0});
    CHECK(std::abs(f.evaluate({0, 0}) - cplx{std::sqrt(2.0), 0.0}) < 1e-12);
    CHECK(std::abs(f.evaluate({1, 0})) < 1e-15);
    CHECK(f.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inner product and integral") {
    Prime p2(2);
    Prime p3(3);
    TestFunction phi2 = haar_phi(p2);
    CHECK(std::abs(inner_product(phi2, phi2) - cplx{1.0, 0.0}) < 1e-15);

    TestFunction a = scaled_translate(phi2, 1, {0, 0});
    TestFunction b = scaled_translate(phi2, 1, {1, 1});
    CHECK(std::abs(inner_product(a, b)) < 1e-15);

    // character orthogonality over the 3 cosets of 3 Z_3
    CHECK(std::abs(inner_product(basic_theta(p3, 1), basic_theta(p3, 2))) < 1e-12);

    CHECK(std::abs(integral(haar_phi(p3)) - cplx{1.0, 0.0}) < 1e-15);
    for (int nu = 1; nu < 3; ++nu)
        CHECK(std::abs(integral(basic_theta(p3, nu))) < 1e-12);
    CHECK(std::abs(integral(TestFunction(p3))) == 0.0);
}

TEST_CASE("projection onto V_k") {
    Prime p2(2), p3(3);
    CHECK(project_V(basic_theta(p3, 1), 0).is_zero());
    std::mt19937_64 rng(5);
    TestFunction f = random_fn(p2, 2, 1, rng);
    CHECK(approx_equal(project_V(f, f.scale()), f));

    TestFunction proj = project_V(scaled_translate(haar_phi(p2), 1, {0, 0}), 0);
    TestFunction expect =
        linear_combine({{1.0 / std::sqrt(2.0), 0}}, {haar_phi(p2)});
    CHECK(approx_equal(proj, expect));

    // idempotent, self-adjoint, norm-nonincreasing
    for (int i = 0; i < 10; ++i) {
        TestFunction g = random_fn(p3, 2, 1, rng);
        TestFunction h = random_fn(p3, 2, 1, rng);
        for (int k : {-1, 0, 1}) {
            TestFunction pg = project_V(g, k);
            CHECK(approx_equal(project_V(pg, k), pg, 1e-9));
            CHECK(std::abs(inner_product(pg, h) - inner_product(g, project_V(h, k))) <
                  1e-9);
            CHECK(pg.norm() <= g.norm() + 1e-12);
            CHECK(approx_equal(pg, g, 1e-9) == is_periodic(g, k));
        }
    }
}

TEST_CASE("w parts and decomposition") {
    Prime p2(2), p3(3);
    for (int nu = 1; nu < 3; ++nu)
        CHECK(approx_equal(w_part(basic_theta(p3, nu), 0), basic_theta(p3, nu)));
    for (int k = 0; k < 4; ++k) CHECK(w_part(haar_phi(p2), k).is_zero());

    TestFunction f10 = scaled_translate(haar_phi(p2), 1, {0, 0});
    TestFunction expect = linear_combine(
        {{1, 0}, {-1.0 / std::sqrt(2.0), 0}}, {f10, haar_phi(p2)});
    CHECK(approx_equal(w_part(f10, 0), expect));

    // finite orthogonal decomposition across V_k shells
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
        TestFunction f = random_fn(p3, 2, 1, rng);
        int M = f.support_exp(), m = f.scale();
        std::vector<TestFunction> parts{project_V(f, -M)};
        for (int k = -M; k < m; ++k) parts.push_back(w_part(f, k));
        std::vector<cplx> ones(parts.size(), cplx{1.0, 0.0});
        CHECK(approx_equal(linear_combine(ones, parts), f, 1e-12));
        for (std::size_t a = 0; a < parts.size(); ++a)
            for (std::size_t b = a + 1; b < parts.size(); ++b)
                CHECK(std::abs(inner_product(parts[a], parts[b])) < 1e-9);
    }
}

TEST_CASE("eigen projections") {
    Prime p2(2), p3(3);
    TestFunction phi = haar_phi(p2);
    CHECK(approx_equal(eigen_project(phi, 0, 1), phi));
    CHECK(eigen_project(phi, 1, 1).is_zero());

    for (int p : {2, 3}) {
        Prime pr(p);
        for (int nu = 1; nu < p; ++nu) {
            TestFunction th = basic_theta(pr, nu);
            for (int m : {1, 2}) {
                std::int64_t l = nu * ipow(p, m - 1);
                CHECK(approx_equal(eigen_project(th, l, m), th, 1e-12));
            }
        }
    }

    // sum of projections reconstructs; distinct l orthogonal; T-eigenvalue
    std::mt19937_64 rng(23);
    for (int i = 0; i < 5; ++i) {
        TestFunction f = random_fn(p3, 2, 0, rng);
        int m = 2;
        std::int64_t P = ipow(3, m);
        std::vector<TestFunction> projs;
        for (std::int64_t l = 0; l < P; ++l) projs.push_back(eigen_project(f, l, m));
        std::vector<cplx> ones(projs.size(), cplx{1.0, 0.0});
        CHECK(approx_equal(linear_combine(ones, projs), f, 1e-9));
        for (std::int64_t l = 0; l < P; ++l) {
            for (std::int64_t l2 = l + 1; l2 < P; ++l2)
                CHECK(std::abs(inner_product(projs[l], projs[l2])) < 1e-9);
            if (!projs[l].is_zero()) {
                TestFunction tf = translate_by_one(projs[l]);
                cplx lam = std::conj(root_of_unity(l, P));
                TestFunction resid = linear_combine({{1, 0}, -lam}, {tf, projs[l]});
                CHECK(resid.norm() < 1e-9);
            }
        }
        // label invariance: V_{m,l} = V_{m+k, l p^k}
        for (int k : {1, 2})
            for (std::int64_t l = 0; l < P; ++l)
                CHECK(approx_equal(eigen_project(f, l * ipow(3, k), m + k),
                                   eigen_project(f, l, m), 1e-9));
    }

    // sum over the unit-label set S_m recovers f - P_{V_{m-1}} f
    {
        TestFunction f = random_fn(p3, 2, 0, rng);
        std::vector<TestFunction> parts;
        for (std::int64_t l = 0; l < 9; ++l)
            if (l % 3 != 0) parts.push_back(eigen_project(f, l, 2));
        std::vector<cplx> ones(parts.size(), cplx{1.0, 0.0});
        TestFunction expect =
            linear_combine({{1, 0}, {-1, 0}}, {f, project_V(f, 1)});
        CHECK(approx_equal(linear_combine(ones, parts), expect, 1e-9));
    }
}

TEST_CASE("translation eigenvalue") {
    Prime p2(2), p3(3);
    for (int p : {2, 3, 5}) {
        Prime pr(p);
        for (int nu = 1; nu < p; ++nu) {
            auto lam = translation_eigenvalue(basic_theta(pr, nu));
            REQUIRE(lam.has_value());
            // chi_p(-nu/p)
            cplx expect = character(pr, {-nu, 1});
            CHECK(std::abs(*lam - expect) < 1e-12);
        }
    }
    auto one = translation_eigenvalue(haar_phi(p3));
    REQUIRE(one.has_value());
    CHECK(std::abs(*one - cplx{1.0, 0.0}) < 1e-15);

    TestFunction mix = linear_combine({{1, 0}, {1, 0}},
                                      {haar_phi(p2), basic_theta(p2, 1)});
    CHECK(!translation_eigenvalue(mix).has_value());
    CHECK_THROWS(translation_eigenvalue(TestFunction(p2)));
}

TEST_CASE("fourier transform") {
    Prime p2(2), p3(3);
    CHECK(approx_equal(fourier(haar_phi(p2)), haar_phi(p2)));
    CHECK(approx_equal(fourier(haar_phi(p3)), haar_phi(p3)));

    // fourier(theta^(nu)) = indicator of -nu/p + Z_p
    for (int p : {2, 3}) {
        Prime pr(p);
        for (int nu = 1; nu < p; ++nu) {
            TestFunction ft = fourier(basic_theta(pr, nu));
            CHECK(std::abs(ft.evaluate({p - nu, 1}) - cplx{1.0, 0.0}) < 1e-12);
            CHECK(std::abs(ft.evaluate({0, 0})) < 1e-12);
            CHECK(ft.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    std::mt19937_64 rng(29);
    for (int i = 0; i < 20; ++i) {
        TestFunction f = random_fn(p3, 2, 1, rng);
        TestFunction g = random_fn(p3, 1, 2, rng);
        // Plancherel
        CHECK(std::abs(inner_product(f, g) - inner_product(fourier(f), fourier(g))) <
              1e-9);
        CHECK(fourier(f).norm() == doctest::Approx(f.norm()).epsilon(1e-11));
        // round trip
        CHECK(approx_equal(fourier_inverse(fourier(f)), f, 1e-9));
        // band limit <-> periodicity, tested through the transform
        CHECK(fourier(f).support_exp() == f.scale());
    }
}

TEST_CASE("is_periodic") {
    Prime p2(2);
    CHECK(is_periodic(haar_phi(p2), 0));
    CHECK(!is_periodic(basic_theta(p2, 1), 0));
    CHECK(is_periodic(basic_theta(p2, 1), 1));
}

TEST_CASE("unitarity of dilation-translation") {
    Prime p2(2);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 15; ++i) {
        TestFunction f = random_fn(p2, 2, 1, rng);
        TestFunction g = random_fn(p2, 1, 1, rng);
        int j = static_cast<int>(rng() % 7) - 3;
        PRational a{static_cast<std::int64_t>(rng() % 8), static_cast<int>(rng() % 3)};
        TestFunction fa = scaled_translate(f, j, a);
        TestFunction ga = scaled_translate(g, j, a);
        CHECK(fa.norm() == doctest::Approx(f.norm()).epsilon(1e-9));
        CHECK(std::abs(inner_product(fa, ga) - inner_product(f, g)) < 1e-9);
    }
}

TEST_CASE("pwf round trip") {
    Prime p2(2);
    TestFunction phi = haar_phi(p2);
    std::string doc = write_pwf(phi);
    CHECK(doc.find("\"p\": 2") != std::string::npos);
    CHECK(doc.find("pwf-1") != std::string::npos);
    TestFunction back = read_pwf(doc);
    CHECK(back.scale() == 0);
    CHECK(back.support_exp() == 0);
    CHECK(back.coeffs().size() == 1);

    std::mt19937_64 rng(37);
    for (int i = 0; i < 20; ++i) {
        TestFunction f = random_fn(p2, 2, 2, rng);
        TestFunction g = read_pwf(write_pwf(f));
        // bit-exact round trip
        REQUIRE(g.coeffs().size() == f.coeffs().size());
        CHECK(g.scale() == f.scale());
        CHECK(g.support_exp() == f.support_exp());
        auto it = g.coeffs().begin();
        for (const auto& [v, c] : f.coeffs()) {
            CHECK(it->first == v);
            CHECK(it->second == c);
            ++it;
        }
        CHECK(write_pwf(g) == write_pwf(f));
    }

    CHECK_THROWS(read_pwf("{\"format\":\"pwf-1\",\"p\":4,\"scale\":0,\"support\":0,\"coeffs\":[]}"));
    CHECK_THROWS(read_pwf("not json"));
    CHECK_THROWS(read_pwf(
        "{\"format\":\"pwf-1\",\"p\":2,\"scale\":0,\"support\":0,"
        "\"coeffs\":[{\"v\":5,\"re\":\"1\",\"im\":\"0\"}]}"));
}

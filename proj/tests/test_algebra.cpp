#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "relint/polynomial.hpp"
#include "relint/roots.hpp"

using namespace relint;

namespace {

HomogeneousPotential cubic_mixed() {
    // V = q1^2 q2 / 2 + q2^3
    return HomogeneousPotential(2, 3, {{Complex(0.5, 0), {2, 1}}, {Complex(1, 0), {0, 3}}});
}

HomogeneousPotential random_homogeneous(std::mt19937& rng, int n, int k) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<Monomial> ms;
    // sweep all exponent vectors of total degree k (n <= 3, k small)
    std::vector<int> e(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == n - 1) {
            e[pos] = rem;
            double c = coef(rng);
            if (std::abs(c) > 0.05) ms.push_back({Complex(c, coef(rng) * 0.5), e});
            return;
        }
        for (int v = 0; v <= rem; ++v) {
            e[pos] = v;
            rec(pos + 1, rem - v);
        }
    };
    rec(0, k);
    if (ms.empty()) {
        std::vector<int> lead(n, 0);
        lead[0] = k;
        ms.push_back({Complex(1, 0), lead});
    }
    return HomogeneousPotential(n, k, ms);
}

CVector random_point(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    CVector q(n);
    for (auto& z : q) z = Complex(d(rng), d(rng));
    return q;
}

}  // namespace

TEST_CASE("potential construction enforces homogeneity") {
    CHECK_THROWS_AS(HomogeneousPotential(2, 3, {{Complex(1, 0), {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(HomogeneousPotential(2, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(HomogeneousPotential(2, 2, {{Complex(0, 0), {2, 0}}}), std::invalid_argument);
    CHECK_THROWS_AS(
        HomogeneousPotential(2, 2, {{Complex(1, 0), {2, 0}}, {Complex(2, 0), {2, 0}}}),
        std::invalid_argument);
}

TEST_CASE("eval") {
    HomogeneousPotential sq(2, 2, {{Complex(1, 0), {2, 0}}});
    CHECK(eval(sq, {Complex(2, 0), Complex(0, 0)}) == Complex(4, 0));

    HomogeneousPotential cubes(2, 3, {{Complex(1, 0), {3, 0}}, {Complex(1, 0), {0, 3}}});
    CHECK(eval(cubes, {Complex(1, 0), Complex(1, 0)}) == Complex(2, 0));

    CHECK(eval(cubic_mixed(), {Complex(0, 0), Complex(1, 0)}) == Complex(1, 0));

    CHECK_THROWS_AS(eval(sq, {Complex(1, 0)}), DimensionMismatch);
}

TEST_CASE("gradient") {
    HomogeneousPotential sq(2, 2, {{Complex(1, 0), {2, 0}}});
    auto g = gradient(sq, {Complex(3, 0), Complex(0, 0)});
    CHECK(g[0] == Complex(6, 0));
    CHECK(g[1] == Complex(0, 0));

    HomogeneousPotential cubes(2, 3, {{Complex(1, 0), {3, 0}}, {Complex(1, 0), {0, 3}}});
    g = gradient(cubes, {Complex(1, 0), Complex(2, 0)});
    CHECK(g[0] == Complex(3, 0));
    CHECK(g[1] == Complex(12, 0));

    g = gradient(cubic_mixed(), {Complex(1, 0), Complex(1, 0)});
    CHECK(g[0] == Complex(1, 0));
    CHECK(g[1] == Complex(3.5, 0));
}

TEST_CASE("hessian") {
    HomogeneousPotential iso(2, 2, {{Complex(1, 0), {2, 0}}, {Complex(1, 0), {0, 2}}});
    auto H = hessian(iso, {Complex(0.3, 0.1), Complex(-2, 0)});
    CHECK(H(0, 0) == Complex(2, 0));
    CHECK(H(1, 1) == Complex(2, 0));
    CHECK(H(0, 1) == Complex(0, 0));

    HomogeneousPotential cube(2, 3, {{Complex(1, 0), {3, 0}}});
    H = hessian(cube, {Complex(1, 0), Complex(0, 0)});
    CHECK(H(0, 0) == Complex(6, 0));
    CHECK(H(1, 1) == Complex(0, 0));

    H = hessian(cubic_mixed(), {Complex(0, 0), Complex(1, 0)});
    CHECK(H(0, 0) == Complex(1, 0));
    CHECK(H(1, 1) == Complex(6, 0));
    CHECK(H(0, 1) == Complex(0, 0));
}

TEST_CASE("Euler identity and Hessian properties on random potentials") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + (int)(rng() % 2);
        int k = 2 + (int)(rng() % 4);
        auto V = random_homogeneous(rng, n, k);
        auto q = random_point(rng, n);

        // q . V'(q) = k V(q)
        auto g = gradient(V, q);
        Complex lhs(0, 0);
        for (int i = 0; i < n; ++i) lhs += q[i] * g[i];
        Complex rhs = double(k) * eval(V, q);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));

        // exact symmetry by construction
        auto H = hessian(V, q);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) CHECK(H(i, j) == H(j, i));

        // V''(phi q) = phi^(k-2) V''(q)
        Complex phi(1.3, -0.4);
        CVector qs(n);
        for (int i = 0; i < n; ++i) qs[i] = phi * q[i];
        auto Hs = hessian(V, qs);
        Complex scale = std::pow(phi, double(k - 2));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(Hs(i, j) - scale * H(i, j)) <=
                      1e-12 * std::max(1.0, std::abs(scale) * std::abs(H(i, j))) + 1e-12);
    }
}

TEST_CASE("polynomial roots: fixed cases") {
    // z^2 - 1
    auto r = polynomial_roots({Complex(-1, 0), Complex(0, 0), Complex(1, 0)});
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - Complex(-1, 0)) < 1e-12);
    CHECK(std::abs(r[1] - Complex(1, 0)) < 1e-12);

    // z^2 + 1
    r = polynomial_roots({Complex(1, 0), Complex(0, 0), Complex(1, 0)});
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - Complex(0, -1)) < 1e-12);
    CHECK(std::abs(r[1] - Complex(0, 1)) < 1e-12);

    // (z-1)^3 = z^3 - 3z^2 + 3z - 1
    r = polynomial_roots({Complex(-1, 0), Complex(3, 0), Complex(-3, 0), Complex(1, 0)});
    REQUIRE(r.size() == 3);
    for (const auto& z : r) CHECK(std::abs(z - Complex(1, 0)) < 1e-6);

    CHECK_THROWS_AS(polynomial_roots({}), RootFindingError);
    CHECK_THROWS_AS(polynomial_roots({Complex(0, 0)}), RootFindingError);
    CHECK_THROWS_AS(polynomial_roots({Complex(2, 0)}), RootFindingError);
}

TEST_CASE("polynomial roots: random polynomials from seeded roots") {
    std::mt19937 rng(987654);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 120; ++trial) {
        int deg = 1 + (int)(rng() % 12);
        std::vector<Complex> roots(deg);
        for (auto& z : roots) z = Complex(d(rng), d(rng));
        std::vector<Complex> coeffs{Complex(1, 0)};
        for (const auto& z : roots) {
            // multiply by (x - z)
            std::vector<Complex> next(coeffs.size() + 1, Complex(0, 0));
            for (size_t i = 0; i < coeffs.size(); ++i) {
                next[i + 1] += coeffs[i];
                next[i] -= z * coeffs[i];
            }
            coeffs = next;
        }
        auto found = polynomial_roots(coeffs);
        REQUIRE(found.size() == roots.size());
        // minimal-distance greedy assignment
        std::vector<bool> used(found.size(), false);
        for (const auto& z : roots) {
            double best = 1e9;
            size_t bi = 0;
            for (size_t i = 0; i < found.size(); ++i) {
                if (used[i]) continue;
                double dd = std::abs(found[i] - z);
                if (dd < best) {
                    best = dd;
                    bi = i;
                }
            }
            used[bi] = true;
            CHECK(best < 1e-8);
        }
    }
}

TEST_CASE("rational reconstruction") {
    auto r = reconstruct_rational(0.5, BigInt(10), 1e-9);
    REQUIRE(r.has_value());
    CHECK(*r == Rational(1, 2));

    r = reconstruct_rational(0.3333333333, BigInt(100), 1e-8);
    REQUIRE(r.has_value());
    CHECK(*r == Rational(1, 3));

    r = reconstruct_rational(0.1249999999, BigInt(1000), 1e-8);
    REQUIRE(r.has_value());
    CHECK(*r == Rational(1, 8));

    CHECK(!reconstruct_rational(0.123456789012, BigInt(10), 1e-12).has_value());
    CHECK_THROWS_AS(reconstruct_rational(0.5, BigInt(0), 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(reconstruct_rational(0.5, BigInt(10), 0.0), std::invalid_argument);

    auto i = reconstruct_rational(41.0 + 4e-10, BigInt(1000000), 1e-8);
    REQUIRE(i.has_value());
    CHECK(*i == Rational(41));
}

TEST_CASE("rational reconstruction is the identity on exact fractions") {
    std::mt19937 rng(13579);
    for (int trial = 0; trial < 5000; ++trial) {
        long q = 1 + (long)(rng() % 10000);
        long p = (long)(rng() % 2000001) - 1000000;
        Rational exact(p, q);
        exact.canonicalize();
        auto rec = reconstruct_rational(to_double(exact), BigInt(10000), 1e-9);
        REQUIRE(rec.has_value());
        CHECK(*rec == exact);
    }
}

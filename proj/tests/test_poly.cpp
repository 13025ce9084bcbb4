#include <gtest/gtest.h>

#include "qhm/poly.hpp"
#include "support.hpp"

using namespace qhm;
using qhm::testing::Rng;

namespace {

const ComplexPoly kQ1({-1.0, 24.0 / 9, -33.0 / 9, 1.0});  // the first n = 3 class

}  // namespace

TEST(Poly, TrimsLeadingZerosAndKeepsZeroPolynomial) {
    const ComplexPoly p({1.0, 2.0, 0.0, 0.0});
    EXPECT_EQ(p.degree(), 1u);
    const ComplexPoly z({0.0, 0.0});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.coeffs().size(), 1u);
}

TEST(Poly, EvalExamples) {
    EXPECT_LT(std::abs(ComplexPoly({-1.0, 0.0, 0.0, 1.0})(1.0)), 1e-15);
    EXPECT_NEAR(kQ1(2.0).real(), -21.0 / 9, 1e-13);
    EXPECT_NEAR(kQ1(4.0 / 9).real(), -329.0 / 729, 1e-13);
    EXPECT_EQ(eval(kQ1, 2.0), kQ1(2.0));
}

TEST(Poly, DerivativeExamples) {
    const ComplexPoly d = derivative(kQ1);
    ASSERT_EQ(d.degree(), 2u);
    EXPECT_NEAR(std::abs(d.coeff(2) - 3.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d.coeff(1) + 66.0 / 9), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d.coeff(0) - 24.0 / 9), 0.0, 1e-14);
    const ComplexPoly t5 = ComplexPoly::monomial(5);
    EXPECT_EQ(derivative(t5).coeff(4), cplx(5.0));
    EXPECT_EQ(derivative(t5).degree(), 4u);
}

TEST(Poly, DerivativeMatchesFiniteDifference) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<cplx> c(static_cast<std::size_t>(rng.integer(2, 9)));
        for (cplx& z : c) z = rng.gaussian();
        const ComplexPoly p(c);
        const cplx z = rng.gaussian();
        const double h = 1e-6 * (1.0 + std::abs(z));
        const cplx fd = (p(z + h) - p(z - h)) / (2.0 * h);
        const cplx exact = derivative(p)(z);
        EXPECT_LE(std::abs(fd - exact), 1e-5 * std::max(1.0, std::abs(exact)));
    }
}

TEST(Poly, FromRootsExamples) {
    const std::vector<cplx> r1{1.0, -1.0};
    const ComplexPoly p = from_roots(r1);
    EXPECT_EQ(p.coeff(0), cplx(-1.0));
    EXPECT_EQ(p.coeff(1), cplx(0.0));
    EXPECT_EQ(p.coeff(2), cplx(1.0));

    const std::vector<cplx> r2{2.0, 1.0, -2.0 / 3};
    const ComplexPoly q = from_roots(r2);
    EXPECT_NEAR(std::abs(q.coeff(2) + 7.0 / 3), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(q.coeff(1)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(q.coeff(0) - 4.0 / 3), 0.0, 1e-14);

    const std::vector<cplx> r3{2.0, 4.0 / 9};
    const ComplexPoly s = from_roots(r3, 3.0);
    EXPECT_NEAR(std::abs(s.coeff(2) - 3.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.coeff(1) + 22.0 / 3), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.coeff(0) - 8.0 / 3), 0.0, 1e-14);

    EXPECT_THROW(from_roots(r1, 0.0), InputError);
}

TEST(Poly, FromRootsMatchesLinearFactorExpansion) {
    Rng rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = rng.distinct_points(rng.integer(1, 10));
        const auto want = qhm::testing::expand_roots(r);
        const ComplexPoly p = from_roots(r);
        ASSERT_EQ(p.coeffs().size(), want.size());
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_LE(std::abs(p.coeff(i) - want[i]), 1e-10);
    }
}

TEST(Poly, RootsExamples) {
    const ComplexPoly q({4.0 / 3, 0.0, -7.0 / 3, 1.0});
    const RootMultiset r = roots(q);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(qhm::testing::match_distance(r.roots, {2.0, 1.0, -2.0 / 3}), 1e-12);
    EXPECT_LE(qhm::testing::match_distance(roots(ComplexPoly({-1.0, 0.0, 1.0})).roots, {1.0, -1.0}), 1e-14);
    EXPECT_THROW(roots(ComplexPoly({3.0})), InputError);
}

TEST(Poly, RootsRecoverRandomRoots) {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(1, 12);
        const auto r = rng.distinct_points(n, 0.1);
        const RootMultiset got = roots(from_roots(r));
        ASSERT_EQ(got.size(), static_cast<std::size_t>(n));
        EXPECT_LE(qhm::testing::match_distance(got.roots, r), 1e-7 * std::max(1.0, max_modulus(r)));
        const ComplexPoly p = from_roots(r);
        for (const cplx& z : got.roots) EXPECT_LE(std::abs(p(z)), 1e-9 * p.eval_bound(z));
    }
}

TEST(Poly, RootsClusterMultipleRoots) {
    const std::vector<cplx> r{1.0, 1.0, -2.0, cplx(0.0, 1.0)};
    const RootMultiset got = roots(from_roots(r));
    const auto clusters = got.clusters();
    ASSERT_EQ(clusters.size(), 3u);
    int doubled = 0;
    for (const auto& c : clusters)
        if (c.multiplicity == 2) {
            ++doubled;
            EXPECT_LE(std::abs(c.center - 1.0), 1e-6);
        }
    EXPECT_EQ(doubled, 1);
    EXPECT_FALSE(got.all_simple());
}

TEST(Poly, RootsKeepExactZeros) {
    const RootMultiset got = roots(ComplexPoly({0.0, 0.0, -1.0, 0.0, 1.0}));
    ASSERT_EQ(got.size(), 4u);
    EXPECT_LE(qhm::testing::match_distance(got.roots, {0.0, 0.0, 1.0, -1.0}), 1e-14);
}

TEST(Poly, ElementarySymmetricExamples) {
    const std::vector<cplx> a{1.0, -1.0};
    const auto s = elementary_symmetric(a);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0], cplx(1.0));
    EXPECT_EQ(s[1], cplx(0.0));
    EXPECT_EQ(s[2], cplx(-1.0));
    const std::vector<cplx> k{2.0, 4.0 / 9};
    const auto t = elementary_symmetric(k);
    EXPECT_NEAR(std::abs(t[1] - 22.0 / 9), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(t[2] - 8.0 / 9), 0.0, 1e-15);
}

TEST(Poly, ElementarySymmetricMatchesSubsetSums) {
    Rng rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = rng.distinct_points(rng.integer(1, 8));
        const auto want = qhm::testing::brute_symmetric(x);
        const auto got = elementary_symmetric(x);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t l = 0; l < want.size(); ++l) EXPECT_LE(std::abs(got[l] - want[l]), 1e-10 * (1.0 + std::abs(want[l])));
        // Vieta: coefficient of t^{n-l} is (-1)^l sigma_l.
        const ComplexPoly p = from_roots(x);
        const std::size_t n = x.size();
        for (std::size_t l = 0; l <= n; ++l) {
            const double sign = l % 2 == 0 ? 1.0 : -1.0;
            EXPECT_LE(std::abs(p.coeff(n - l) - sign * want[l]), 1e-10 * (1.0 + std::abs(want[l])));
        }
    }
}

TEST(Poly, CriticalPointSymmetricIdentity) {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.integer(3, 8);
        const auto lam = rng.distinct_points(n);
        const auto kap = roots(derivative(from_roots(lam))).roots;
        const auto sl = qhm::testing::brute_symmetric(lam);
        const auto sk = qhm::testing::brute_symmetric(kap);
        for (int l = 1; l < n; ++l) {
            const cplx want = (static_cast<double>(n - l) / n) * sl[static_cast<std::size_t>(l)];
            EXPECT_LE(std::abs(sk[static_cast<std::size_t>(l)] - want), 1e-9 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST(Poly, ResultantExamples) {
    EXPECT_NEAR(std::abs(resultant(ComplexPoly({0.0, 0.0, 1.0}), ComplexPoly({0.0, 1.0}))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(resultant(ComplexPoly({-1.0, 1.0}), ComplexPoly({1.0, 1.0})) - 2.0), 0.0, 1e-14);
    for (int n = 3; n <= 8; ++n) {
        std::vector<cplx> c(static_cast<std::size_t>(n) + 1, 0.0);
        c[0] = -1.0;
        c.back() = 1.0;
        const ComplexPoly d1 = derivative(ComplexPoly(c));
        EXPECT_NEAR(std::abs(resultant(d1, derivative(d1))), 0.0, 1e-12);
    }
}

TEST(Poly, ResultantIsProductOfRootDifferences) {
    // res(p, q) = prod_{i,j} (a_i - b_j) for monic p, q.
    Rng rng(16);
    for (int trial = 0; trial < 40; ++trial) {
        const auto a = rng.distinct_points(rng.integer(1, 5));
        const auto b = rng.distinct_points(rng.integer(1, 5));
        cplx want = 1.0;
        for (const cplx& x : a)
            for (const cplx& y : b) want *= x - y;
        const cplx got = resultant(from_roots(a), from_roots(b));
        EXPECT_LE(std::abs(got - want), 1e-9 * std::max(1.0, std::abs(want)));
    }
}

TEST(Poly, ResultantVanishesExactlyOnSharedRoots) {
    Rng rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto a = rng.distinct_points(3);
        auto b = rng.distinct_points(3);
        b[0] = a[1];
        EXPECT_LE(std::abs(normalized_resultant(from_roots(a), from_roots(b))), 1e-10);
        b[0] = a[1] + 0.3;
        EXPECT_GT(std::abs(normalized_resultant(from_roots(a), from_roots(b))), 1e-8);
    }
}

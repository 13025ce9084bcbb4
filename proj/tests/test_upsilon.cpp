#include <gtest/gtest.h>

#include <algorithm>

#include "qhm/upsilon.hpp"
#include "support.hpp"

using namespace qhm;
using qhm::testing::Rng;
using qhm::testing::match_distance;

namespace {

// Critical points of a normalized random configuration, in the given type's chart.
struct Forward {
    std::vector<cplx> lambdas;
    std::vector<cplx> kappa;  // full tuple
    FiberTarget target;
};

Forward random_forward(GermType type, int n, Rng& rng) {
    for (;;) {
        Configuration c(Space::Plane, rng.distinct_points(n, 0.2));
        if (type == GermType::II) c = center(c);
        if (std::abs(c.product()) < 1e-2) continue;
        c = unit_product(c);
        Forward f;
        f.lambdas = c.points();
        f.kappa = roots(derivative(from_roots(f.lambdas))).roots;
        if (type == GermType::II) {
            // put the largest kappa last, it is the eliminated coordinate
            std::iter_swap(std::min_element(f.kappa.begin(), f.kappa.end(), [](cplx a, cplx b) { return std::abs(a) > std::abs(b); }),
                           f.kappa.end() - 1);
            f.kappa.back() = 0.0;
            for (std::size_t i = 0; i + 1 < f.kappa.size(); ++i) f.kappa.back() -= f.kappa[i];
        }
        std::vector<cplx> free(f.kappa.begin(), f.kappa.end() - (type == GermType::II ? 1 : 0));
        f.target = {type, n, upsilon(type, free)};
        return f;
    }
}

double distance_to_fiber(const Fiber& fib, const std::vector<cplx>& kappa) {
    double best = 1e300;
    for (const auto& s : fib.solutions) {
        double d = 0.0;
        for (std::size_t i = 0; i < kappa.size(); ++i) d = std::max(d, std::abs(s.kappa[i] - kappa[i]));
        best = std::min(best, d);
    }
    return best;
}

}  // namespace

TEST(Upsilon, TypeIIExamples) {
    const std::vector<cplx> one{1.0};
    const UpsilonIIResult r = upsilon_II(one);
    ASSERT_EQ(r.values.size(), 1u);
    EXPECT_LE(std::abs(r.values[0] + 3.0), 1e-14);
    EXPECT_LE(std::abs(r.auxiliary - 1.0), 1e-14);

    const std::vector<cplx> zero{0.0};
    const UpsilonIIResult z = upsilon_II(zero);
    EXPECT_LE(std::abs(z.values[0] + 1.0), 1e-15);
    EXPECT_LE(std::abs(z.auxiliary + 1.0), 1e-15);
}

TEST(Upsilon, TypeIICubicReduction) {
    // n = 3: rho_1 = -2 kappa_1^3 - 1 and rho_2 = -rho_1 - 2.
    Rng rng(51);
    for (int i = 0; i < 50; ++i) {
        const std::vector<cplx> k{rng.gaussian()};
        const UpsilonIIResult r = upsilon_II(k);
        EXPECT_LE(std::abs(r.values[0] - (-2.0 * std::pow(k[0], 3) - 1.0)), 1e-12 * (1.0 + std::norm(k[0]) * std::abs(k[0])));
        EXPECT_LE(std::abs(r.auxiliary + r.values[0] + 2.0), 1e-12 * (1.0 + std::abs(r.values[0])));
    }
}

TEST(Upsilon, TypeIIIExamples) {
    const std::vector<cplx> k1{2.0, 4.0 / 9};
    const auto r1 = upsilon_III(k1);
    EXPECT_LE(std::abs(r1[0] + 21.0 / 9), 1e-13);
    EXPECT_LE(std::abs(r1[1] + 329.0 / 729), 1e-13);

    const std::vector<cplx> k2{1.0, -5.0 / 9};
    const auto r2 = upsilon_III(k2);
    EXPECT_LE(std::abs(r2[0] + 21.0 / 9), 1e-13);
    EXPECT_LE(std::abs(r2[1] + 329.0 / 729), 1e-13);

    const std::vector<cplx> k3{0.0};
    EXPECT_LE(std::abs(upsilon_III(k3)[0] - 1.0), 1e-15);
    EXPECT_THROW(upsilon(GermType::I, k3), UnsupportedTypeError);
}

TEST(Upsilon, MatchesPolynomialThroughCriticalPoints) {
    // Independent construction: Q' = n prod (t - kappa_j), integrate, fix Q(0) = (-1)^n.
    Rng rng(52);
    for (int n = 2; n <= 6; ++n) {
        const auto kap = rng.distinct_points(n - 1);
        auto d = qhm::testing::expand_roots(kap);
        std::vector<cplx> q(static_cast<std::size_t>(n) + 1, 0.0);
        q[0] = n % 2 == 0 ? 1.0 : -1.0;
        for (std::size_t i = 0; i < d.size(); ++i) q[i + 1] = static_cast<double>(n) * d[i] / static_cast<double>(i + 1);
        const ComplexPoly Q(q);
        const auto got = upsilon_III(kap);
        for (int j = 0; j < n - 1; ++j) EXPECT_LE(std::abs(got[static_cast<std::size_t>(j)] - Q(kap[static_cast<std::size_t>(j)])), 1e-10 * Q.eval_bound(kap[static_cast<std::size_t>(j)]));
    }
}

TEST(Upsilon, InvariantUnderRootsOfUnity) {
    Rng rng(53);
    for (int n = 3; n <= 7; ++n) {
        const auto kap = rng.distinct_points(n - 1);
        const std::vector<cplx> free(kap.begin(), kap.end() - 1);
        const auto base3 = upsilon_III(kap);
        const auto base2 = upsilon_II(free).values;
        for (int s = 1; s < n; ++s) {
            const cplx w = root_of_unity(s, n);
            std::vector<cplx> rk, rf;
            for (const cplx& z : kap) rk.push_back(w * z);
            for (const cplx& z : free) rf.push_back(w * z);
            const auto r3 = upsilon_III(rk);
            const auto r2 = upsilon_II(rf).values;
            for (std::size_t j = 0; j < r3.size(); ++j) EXPECT_LE(std::abs(r3[j] - base3[j]), 1e-10 * (1.0 + std::abs(base3[j])));
            for (std::size_t j = 0; j < r2.size(); ++j) EXPECT_LE(std::abs(r2[j] - base2[j]), 1e-10 * (1.0 + std::abs(base2[j])));
        }
    }
}

TEST(FiberTarget, Validation) {
    EXPECT_THROW(solve_fiber({GermType::I, 3, {1.0, 2.0}}), UnsupportedTypeError);
    EXPECT_THROW(solve_fiber({GermType::III, 3, {1.0}}), InputError);
    EXPECT_THROW(solve_fiber({GermType::II, 2, {}}), InputError);
    EXPECT_THROW(solve_fiber({GermType::III, 9, std::vector<cplx>(8, 1.0)}), InputError);
    SolverConfig bad;
    bad.step_min = 0.0;
    EXPECT_THROW(solve_fiber({GermType::III, 2, {0.5}}, bad), InputError);
}

TEST(SolveFiber, WorkedExampleTypeIII) {
    const Fiber f = solve_fiber({GermType::III, 3, {-21.0 / 9, -329.0 / 729}});
    ASSERT_EQ(f.solutions.size(), 9u);
    EXPECT_EQ(f.bezout, 9);
    EXPECT_EQ(f.finite_mass() + f.diverged, 9);
    EXPECT_FALSE(f.degenerate);
    EXPECT_FALSE(f.incomplete());
    ASSERT_EQ(f.orbits.size(), 3u);
    for (const auto& o : f.orbits) EXPECT_EQ(o.size(), 3u);
    for (const auto& s : f.solutions) {
        EXPECT_EQ(s.multiplicity, 1);
        EXPECT_LE(s.residual, 1e-10);
    }
    const std::vector<std::vector<cplx>> reps{{2.0, 4.0 / 9}, {1.0, -5.0 / 9}, {-2.0 / 3, -20.0 / 9}};
    for (const auto& r : reps)
        for (int s = 0; s < 3; ++s) {
            const std::vector<cplx> rot{root_of_unity(s, 3) * r[0], root_of_unity(s, 3) * r[1]};
            EXPECT_LE(distance_to_fiber(f, rot), 1e-6);
        }

    const auto classes = classes_from_fiber(f);
    ASSERT_EQ(classes.size(), 3u);
    for (const auto& c : classes) {
        EXPECT_TRUE(c.reduced);
        EXPECT_LE(c.hp_error, 1e-7);
        EXPECT_EQ(c.orbit_size, 3);
    }
    // Representatives are the real members of each orbit.
    for (const auto& r : reps) {
        const bool found = std::any_of(classes.begin(), classes.end(), [&](const ClassRecord& c) {
            return std::abs(c.kappa[0] - r[0]) < 1e-8 && std::abs(c.kappa[1] - r[1]) < 1e-8;
        });
        EXPECT_TRUE(found);
    }
}

TEST(SolveFiber, TypeIICubeRoots) {
    const Fiber f = solve_fiber({GermType::II, 3, {-3.0}});
    ASSERT_EQ(f.solutions.size(), 3u);
    ASSERT_EQ(f.orbits.size(), 1u);
    for (const auto& s : f.solutions) {
        EXPECT_LE(std::abs(std::pow(s.kappa[0], 3) - 1.0), 1e-10);
        EXPECT_LE(std::abs(s.kappa[0] + s.kappa[1]), 1e-12);
    }
    const auto classes = classes_from_fiber(f);
    ASSERT_EQ(classes.size(), 1u);
    EXPECT_LE(std::abs(classes[0].kappa[0] - 1.0), 1e-9);
    // sigma_2(lambda) = 3 sigma_2(kappa) = -3: Q = t^3 - 3 t - 1.
    EXPECT_LE(std::abs(classes[0].q.coeff(1) + 3.0), 1e-9);
    EXPECT_LE(std::abs(classes[0].q.coeff(2)), 1e-9);
    EXPECT_LE(classes[0].hp_error, 1e-7);
}

TEST(SolveFiber, TypeIIINTwo) {
    const Fiber f = solve_fiber({GermType::III, 2, {0.75}});
    ASSERT_EQ(f.solutions.size(), 2u);
    EXPECT_EQ(f.orbits.size(), 1u);
    for (const auto& s : f.solutions) EXPECT_LE(std::abs(s.kappa[0] * s.kappa[0] - 0.25), 1e-12);
    EXPECT_EQ(count_classes(f).classes, 1);
    EXPECT_TRUE(count_classes(f).equality);
}

TEST(SolveFiber, BezoutAccountingAndCounts) {
    Rng rng(54);
    struct Case {
        GermType type;
        int n;
        std::size_t solutions;
        int classes;
    };
    for (const Case c : {Case{GermType::II, 3, 3, 1}, Case{GermType::II, 4, 16, 4}, Case{GermType::III, 3, 9, 3}, Case{GermType::III, 4, 64, 16}}) {
        for (int trial = 0; trial < 3; ++trial) {
            const Forward fw = random_forward(c.type, c.n, rng);
            const Fiber f = solve_fiber(fw.target);
            EXPECT_EQ(f.finite_mass() + f.diverged + f.failed, f.bezout);
            EXPECT_EQ(f.bezout, bezout_number(c.type, c.n));
            EXPECT_EQ(f.solutions.size(), c.solutions);
            const CountReport r = count_classes(f);
            EXPECT_EQ(r.classes, c.classes);
            EXPECT_EQ(r.bound, class_bound(c.type, c.n));
            EXPECT_TRUE(r.equality);
            for (const auto& o : f.orbits) EXPECT_EQ(c.n % static_cast<int>(o.size()), 0);
        }
    }
}

TEST(SolveFiber, ForwardInverse) {
    Rng rng(55);
    for (const GermType type : {GermType::II, GermType::III})
        for (int n = 3; n <= 5; ++n) {
            if (type == GermType::III && n == 5) continue;  // covered by the acceptance run
            const Forward fw = random_forward(type, n, rng);
            const Fiber f = solve_fiber(fw.target);
            EXPECT_LE(distance_to_fiber(f, fw.kappa), 1e-6);
            for (const auto& s : f.solutions) {
                const std::vector<cplx> free(s.kappa.begin(), s.kappa.end() - (type == GermType::II ? 1 : 0));
                const auto back = upsilon(type, free);
                for (std::size_t j = 0; j < back.size(); ++j)
                    EXPECT_LE(std::abs(back[j] - fw.target.targets[j]), 1e-7 * (1.0 + std::abs(fw.target.targets[j])));
            }
            // Exactly one class reproduces the original configuration.
            const Space space = type == GermType::II ? Space::Plane : Space::Punctured;
            int hits = 0;
            for (const auto& c : classes_from_fiber(f))
                hits += equivalent(Configuration(space, c.lambdas), Configuration(space, fw.lambdas), type).equivalent;
            EXPECT_EQ(hits, 1);
        }
}

TEST(SolveFiber, SolutionsShareTheInvariant) {
    Rng rng(56);
    const Forward fw = random_forward(GermType::III, 4, rng);
    const Fiber f = solve_fiber(fw.target);
    const auto classes = classes_from_fiber(f);
    ASSERT_FALSE(classes.empty());
    const HPInvariant first = hp_invariant(QHFunction(Weights(2, 3), 0, 0, classes[0].lambdas, Tolerance{0.0, 1e-12}));
    for (const auto& c : classes) {
        const HPInvariant inv = hp_invariant(QHFunction(Weights(2, 3), 0, 0, c.lambdas, Tolerance{0.0, 1e-12}));
        EXPECT_TRUE(hp_equal(first, inv, 1e-6));
    }
}

TEST(SolveFiber, DeterministicForFixedSeed) {
    const FiberTarget t{GermType::III, 4, {cplx(0.3, -1.2), cplx(2.0, 0.4), cplx(-0.7, 0.1)}};
    SolverConfig a;
    a.seed = 7;
    const Fiber f1 = solve_fiber(t, a);
    const Fiber f2 = solve_fiber(t, a);
    ASSERT_EQ(f1.solutions.size(), f2.solutions.size());
    for (std::size_t i = 0; i < f1.solutions.size(); ++i) {
        EXPECT_EQ(f1.solutions[i].kappa, f2.solutions[i].kappa);
        EXPECT_EQ(f1.solutions[i].residual, f2.solutions[i].residual);
    }
    EXPECT_EQ(f1.orbits, f2.orbits);

    SolverConfig b;
    b.seed = 8;
    const Fiber f3 = solve_fiber(t, b);
    ASSERT_EQ(f3.solutions.size(), f1.solutions.size());
    for (std::size_t i = 0; i < f1.solutions.size(); ++i)
        for (std::size_t j = 0; j < f1.solutions[i].kappa.size(); ++j)
            EXPECT_LE(std::abs(f1.solutions[i].kappa[j] - f3.solutions[i].kappa[j]), 1e-6);
}

TEST(SolveFiber, DegenerateTargets) {
    // All kappa = 0: every solution collapses onto one point of full multiplicity.
    for (int n = 3; n <= 5; ++n) {
        const std::vector<cplx> zeros(static_cast<std::size_t>(n - 1), 0.0);
        const Fiber f = solve_fiber({GermType::III, n, upsilon_III(zeros)});
        EXPECT_TRUE(f.degenerate);
        ASSERT_EQ(f.solutions.size(), 1u);
        EXPECT_EQ(f.solutions[0].multiplicity, f.bezout);
        EXPECT_LE(max_modulus(f.solutions[0].kappa), 1e-3);
        EXPECT_TRUE(count_classes(f).degenerate);
        EXPECT_FALSE(count_classes(f).warnings.empty());
    }

    const FiberTarget zero_entry{GermType::III, 3, {0.0, 1.0}};
    const Fiber fz = solve_fiber(zero_entry);
    const DegeneracyReport r = is_degenerate_target(zero_entry, fz);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(fz.degenerate);

    const FiberTarget worked{GermType::III, 3, {-21.0 / 9, -329.0 / 729}};
    EXPECT_FALSE(is_degenerate_target(worked, solve_fiber(worked)).degenerate);
}

TEST(SolveFiber, DoubledCriticalPointGivesAMultipleSolution) {
    // kappa_1 = kappa_2 is fixed by the swap of the two coordinates, so two paths meet there.
    const std::vector<cplx> kap{cplx(0.7, 0.2), cplx(0.7, 0.2), cplx(-0.4, 0.9)};
    const FiberTarget t{GermType::III, 4, upsilon_III(kap)};
    const Fiber f = solve_fiber(t);
    const DegeneracyReport r = is_degenerate_target(t, f);
    EXPECT_TRUE(r.degenerate);
    EXPECT_TRUE(f.degenerate);
    EXPECT_EQ(f.finite_mass() + f.diverged + f.failed, f.bezout);
    bool found = false;
    for (const auto& s : f.solutions)
        if (std::abs(s.kappa[0] - kap[0]) < 1e-4 && std::abs(s.kappa[1] - kap[1]) < 1e-4 && std::abs(s.kappa[2] - kap[2]) < 1e-4)
            found = s.multiplicity >= 2;
    EXPECT_TRUE(found);
}

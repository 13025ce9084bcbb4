#pragma once

// Built-in regression suite over the worked examples: the n = 3 type III classes with a common
// HP invariant, the small type II reductions, the n = 2 type III case and the critical-point
// identity sigma_l(kappa) = (n - l)/n sigma_l(lambda). Reports carry no timings so that equal
// seeds give byte-identical documents.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/hp.hpp"
#include "qhm/moduli.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"
#include "qhm/upsilon.hpp"

namespace qhm {

/// Reference values of the worked examples; overridable to check that the suite notices.
struct ReferenceConstants {
    // Q = t^3 + a2 t^2 + a1 t - 1 for the three type III classes, (a2, a1).
    std::array<std::array<double, 2>, 3> q_coeffs{{{-33.0 / 9, 24.0 / 9}, {-6.0 / 9, -15.0 / 9}, {39.0 / 9, 40.0 / 9}}};
    std::array<std::array<double, 2>, 3> kappas{{{2.0, 4.0 / 9}, {1.0, -5.0 / 9}, {-2.0 / 3, -20.0 / 9}}};
    double rho1 = -21.0 / 9;
    double rho2 = -329.0 / 729;
    double rho0 = -1.0;
    double kappa_gap = 14.0 / 9;  // kappa_1 - kappa_2, the same in all three classes
    // Type II, n = 3: rho_1 = -2 kappa_1^3 - 1 and rho_2 = -rho_1 - 2.
    double type2_kappa = 1.0;
    double type2_rho1 = -3.0;
    double type2_rho2 = 1.0;
    // Type III, n = 2: rho_1 = 1 - kappa_1^2.
    double type3_n2_kappa = 0.5;
    double type3_n2_rho1 = 0.75;
    int type3_n3_solutions = 9;
    int type3_n3_classes = 3;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured_error = 0.0;
    double tolerance = 0.0;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::vector<cplx>> fiber_solutions;  // the n = 3 type III fiber, canonical order

    [[nodiscard]] bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

namespace detail {

inline void check(VerifyReport& r, std::string name, double err, double tol) {
    r.checks.push_back({std::move(name), std::isfinite(err) && err <= tol, err, tol});
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

inline VerifyReport verify_reference_suite(const SolverConfig& cfg = {}, const ReferenceConstants& pc = {}) {
    VerifyReport rep;
    using detail::check;
    using detail::rel;
    const cplx rho1 = pc.rho1;
    const cplx rho2 = pc.rho2;

    auto q_of = [&](int c) {
        return ComplexPoly({-1.0, pc.q_coeffs[c][1], pc.q_coeffs[c][0], 1.0});
    };

    // Critical values of the first class by direct evaluation.
    const ComplexPoly q1 = q_of(0);
    check(rep, "eval_rho1_at_kappa1", std::abs(q1(pc.kappas[0][0]) - rho1), 1e-12);
    check(rep, "eval_rho2_at_kappa2", std::abs(q1(pc.kappas[0][1]) - rho2), 1e-12);

    // Its derivative is 3 (t^2 - 22/9 t + 8/9).
    const ComplexPoly d1 = derivative(q1);
    check(rep, "derivative_coefficients",
          std::max({std::abs(d1.coeff(0) - 24.0 / 9), std::abs(d1.coeff(1) + 66.0 / 9), std::abs(d1.coeff(2) - 3.0)}),
          1e-12);

    // HP invariant of the germ y^2 - lambda x^3 type with this Q.
    {
        double err = 0.0;
        try {
            const QHFunction f = f_of_q(q1, Weights{2, 3});
            const HPInvariant inv = hp_invariant(f);
            std::vector<cplx> want{rho1, rho2};
            canonical_sort(want);
            err = inv.rhos.size() == 2 ? std::max(std::abs(inv.rhos[0] - want[0]), std::abs(inv.rhos[1] - want[1]))
                                       : INFINITY;
            err = std::max(err, std::abs(*inv.rho0 - cplx{pc.rho0}));
        } catch (const Error&) {
            err = INFINITY;
        }
        check(rep, "hp_invariant_rhos", err, 1e-9);
    }

    // The three kappa representatives map to the same target.
    for (int c = 0; c < 3; ++c) {
        const std::vector<cplx> k{pc.kappas[c][0], pc.kappas[c][1]};
        const auto rho = upsilon_III(k);
        check(rep, "upsilon_III_class_" + std::to_string(c + 1), std::max(rel(rho[0], rho1), rel(rho[1], rho2)), 1e-12);
        check(rep, "kappa_gap_class_" + std::to_string(c + 1), std::abs(k[0] - k[1] - cplx{pc.kappa_gap}), 1e-12);
    }
    // (kappa_1 - kappa_2)^3 = 2 (rho_2 - rho_1).
    check(rep, "kappa_gap_cubed", rel(std::pow(cplx{pc.kappa_gap}, 3), 2.0 * (rho2 - rho1)), 1e-12);

    // The fiber over (rho_1, rho_2): nine simple points in three Z_3 orbits.
    const Fiber fiber = solve_fiber({GermType::III, 3, {rho1, rho2}}, cfg);
    for (const auto& s : fiber.solutions) rep.fiber_solutions.push_back(s.kappa);
    check(rep, "fiber_solution_count",
          std::abs(static_cast<double>(fiber.solutions.size()) - pc.type3_n3_solutions), 0.0);
    check(rep, "fiber_all_simple", static_cast<double>(fiber.finite_mass()) - static_cast<double>(fiber.solutions.size()), 0.0);
    check(rep, "fiber_orbit_count", std::abs(static_cast<double>(fiber.orbits.size()) - pc.type3_n3_classes), 0.0);
    {
        double worst = 0.0;
        for (const auto& s : fiber.solutions) worst = std::max(worst, s.residual);
        check(rep, "fiber_residuals", worst, 1e-10);
    }

    // Each expected representative appears in the fiber, and the reconstructed Q's match.
    const auto classes = classes_from_fiber(fiber);
    for (int c = 0; c < 3; ++c) {
        const std::vector<cplx> k{pc.kappas[c][0], pc.kappas[c][1]};
        double best = INFINITY;
        for (const auto& s : fiber.solutions) best = std::min(best, std::max(std::abs(s.kappa[0] - k[0]), std::abs(s.kappa[1] - k[1])));
        check(rep, "fiber_contains_class_" + std::to_string(c + 1), best, 1e-6);

        const ComplexPoly want = q_of(c);
        double qbest = INFINITY;
        for (const auto& rec : classes) {
            // Representatives are defined up to the Z_3 action, which multiplies the coefficient
            // of t^j by w^(3-j); compare against every rotation.
            for (int s = 0; s < 3; ++s) {
                double e = 0.0;
                for (int j = 0; j <= 3; ++j)
                    e = std::max(e, std::abs(rec.q.coeff(static_cast<std::size_t>(j)) * root_of_unity(s * (3 - j), 3) -
                                             want.coeff(static_cast<std::size_t>(j))));
                qbest = std::min(qbest, e);
            }
        }
        check(rep, "class_Q_coefficients_" + std::to_string(c + 1), qbest, 1e-8);
    }
    {
        double hp = 0.0;
        for (const auto& rec : classes) hp = std::max(hp, rec.hp_error);
        check(rep, "classes_reproduce_invariant", hp, 1e-7);
    }
    {
        int equal_pairs = 0;
        for (std::size_t a = 0; a < classes.size(); ++a)
            for (std::size_t b = a + 1; b < classes.size(); ++b)
                if (equivalent(Configuration(Space::Punctured, classes[a].lambdas),
                               Configuration(Space::Punctured, classes[b].lambdas), GermType::III)
                        .equivalent)
                    ++equal_pairs;
        check(rep, "classes_pairwise_inequivalent", equal_pairs, 0.0);
    }

    // Type II, n = 3.
    {
        const std::vector<cplx> k{pc.type2_kappa};
        const auto out = upsilon_II(k);
        check(rep, "upsilon_II_n3_rho1", std::abs(out.values[0] - cplx{pc.type2_rho1}), 1e-12);
        check(rep, "upsilon_II_n3_auxiliary", std::abs(out.auxiliary - cplx{pc.type2_rho2}), 1e-12);
        const Fiber f = solve_fiber({GermType::II, 3, {pc.type2_rho1}}, cfg);
        check(rep, "type_II_n3_solutions", std::abs(static_cast<double>(f.solutions.size()) - 3.0), 0.0);
        check(rep, "type_II_n3_classes", std::abs(static_cast<double>(f.orbits.size()) - 1.0), 0.0);
        double cube = 0.0;
        for (const auto& s : f.solutions) cube = std::max(cube, std::abs(std::pow(s.kappa[0], 3) - 1.0));
        check(rep, "type_II_n3_cube_roots", cube, 1e-9);
    }

    // Type II, n = 4: 16 points in 4 orbits over a fixed generic target.
    {
        const std::vector<cplx> k{{0.3, 0.7}, {-1.1, 0.2}};
        const Fiber f = solve_fiber({GermType::II, 4, upsilon_II(k).values}, cfg);
        check(rep, "type_II_n4_solutions", std::abs(static_cast<double>(f.solutions.size()) - 16.0), 0.0);
        check(rep, "type_II_n4_classes", std::abs(static_cast<double>(f.orbits.size()) - 4.0), 0.0);
    }

    // Type III, n = 2: rho_1 = 1 - kappa_1^2, two points +-sqrt(1 - rho_1), one class.
    {
        const std::vector<cplx> k{pc.type3_n2_kappa};
        check(rep, "upsilon_III_n2", std::abs(upsilon_III(k)[0] - cplx{pc.type3_n2_rho1}), 1e-12);
        const Fiber f = solve_fiber({GermType::III, 2, {pc.type3_n2_rho1}}, cfg);
        double err = f.solutions.size() == 2 ? 0.0 : INFINITY;
        for (const auto& s : f.solutions) err = std::max(err, std::abs(s.kappa[0] * s.kappa[0] - (1.0 - pc.type3_n2_rho1)));
        check(rep, "type_III_n2_solutions", err, 1e-9);
        check(rep, "type_III_n2_classes", std::abs(static_cast<double>(f.orbits.size()) - 1.0), 0.0);
    }

    // Type III, n = 4: 64 points in 16 orbits.
    {
        const std::vector<cplx> k{{0.4, -0.9}, {1.2, 0.5}, {-0.7, 0.3}};
        const Fiber f = solve_fiber({GermType::III, 4, upsilon_III(k)}, cfg);
        check(rep, "type_III_n4_solutions", std::abs(static_cast<double>(f.solutions.size()) - 64.0), 0.0);
        check(rep, "type_III_n4_classes", std::abs(static_cast<double>(f.orbits.size()) - 16.0), 0.0);
    }

    // sigma_l(kappa) = (n - l)/n sigma_l(lambda) on a fixed configuration.
    {
        const std::vector<cplx> lam{{1.3, 0.2}, {-0.4, 1.1}, {0.7, -0.8}, {-1.5, -0.3}, {0.2, 0.9}};
        const int n = static_cast<int>(lam.size());
        const auto sl = elementary_symmetric(lam);
        const auto kap = roots(derivative(from_roots(lam))).roots;
        const auto sk = elementary_symmetric(kap);
        double err = 0.0;
        for (int l = 1; l < n; ++l) {
            const cplx want = (static_cast<double>(n - l) / n) * sl[static_cast<std::size_t>(l)];
            err = std::max(err, rel(sk[static_cast<std::size_t>(l)], want));
        }
        check(rep, "critical_point_symmetric_functions", err, 1e-9);
    }
    return rep;
}

}  // namespace qhm

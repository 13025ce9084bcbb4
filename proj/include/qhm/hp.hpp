#pragma once

// Henry-Parusinski invariants of commode type II / III germs: the leading coefficients
// rho_0 = Q(0) (branch y = 0, exponent qn) and rho_l = Q(kappa_l) (branches y^p = kappa_l x^q,
// exponent pqn), compared modulo the weighted scaling action
//   type III: (rho_0, rho_l) ~ (rho_0 xi^{qn}, rho_l xi^{pqn}),
//   type II : rho_l ~ rho_l xi^{qn}   (any nonzero common factor).

#include <optional>
#include <string>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/moduli.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"

namespace qhm {

struct HPInvariant {
    GermType germ_type = GermType::III;
    Weights weights;
    int n = 0;
    std::optional<cplx> rho0;  // present iff type III
    std::vector<cplx> rhos;    // one per polar branch with kappa != 0, with multiplicity
    int zero_kappas = 0;       // critical points at 0 (no branch, degenerate direction)

    [[nodiscard]] int h_y_branch() const noexcept { return weights.q * n; }
    [[nodiscard]] int h_polar() const noexcept { return weights.p * weights.q * n; }

    /// c_l = rho_l / rho_0 (type III); the rhos themselves for type II.
    [[nodiscard]] std::vector<cplx> c_ratios() const {
        std::vector<cplx> out = rhos;
        if (rho0)
            for (cplx& c : out) c /= *rho0;
        return out;
    }
};

/// rho-values of a type II / III germ; the germ is reduced to its commode part first.
inline HPInvariant hp_invariant(const QHFunction& f, const RootFinderConfig& cfg = {}) {
    if (f.germ_type() == GermType::I)
        throw UnsupportedTypeError(
            "HP invariants are not defined for reduced homogeneous (type I) germs");
    const QHFunction g = commode_reduce(f);
    const ComplexPoly q = q_of_f(g);
    const PolarCurve polar = polar_curve(g, cfg);

    HPInvariant out;
    out.germ_type = g.germ_type();
    out.weights = g.weights();
    out.n = g.n();
    if (out.germ_type == GermType::III) out.rho0 = q(cplx{0.0});
    for (const PolarBranch& b : polar.branches) out.rhos.push_back(q(b.kappa));
    out.zero_kappas = static_cast<int>(polar.kappas.size()) - polar.r();
    canonical_sort(out.rhos);
    return out;
}

namespace detail {

inline void require_comparable(const HPInvariant& a, const HPInvariant& b) {
    if (a.germ_type != b.germ_type || !(a.weights == b.weights) || a.n != b.n)
        throw IncomparableError("HP invariants with different (type, p, q, n) are incomparable");
}

/// rho_l / rho_0^p: removes the whole type III scaling ambiguity, since xi^{qn} = 1 forces
/// xi^{pqn} = 1.
inline std::vector<cplx> rho0_normalized(const HPInvariant& a) {
    const cplx scale = std::pow(*a.rho0, a.weights.p);
    std::vector<cplx> out;
    out.reserve(a.rhos.size());
    for (const cplx& r : a.rhos) out.push_back(r / scale);
    return out;
}

inline bool is_degenerate(const HPInvariant& a, double rtol) {
    const double top = std::max(max_modulus(a.rhos), a.rho0 ? std::abs(*a.rho0) : 0.0);
    if (a.rho0 && std::abs(*a.rho0) <= rtol * top) return true;
    for (const cplx& r : a.rhos)
        if (std::abs(r) <= rtol * top) return true;
    return top == 0.0;
}

}  // namespace detail

/// Equality modulo the weighted scaling action; multisets compared with multiplicity.
inline bool hp_equal(const HPInvariant& a, const HPInvariant& b, double rtol = 1e-8) {
    detail::require_comparable(a, b);
    if (a.rhos.size() != b.rhos.size()) return false;
    if (a.germ_type == GermType::III) {
        if (!a.rho0 || !b.rho0) throw InputError("type III invariant without rho_0");
        if (*a.rho0 == cplx{0.0} || *b.rho0 == cplx{0.0}) return false;
        const auto na = detail::rho0_normalized(a);
        const auto nb = detail::rho0_normalized(b);
        const Tolerance tol{rtol * std::max(1e-300, max_modulus(nb)), rtol};
        return multiset_equal(na, nb, tol);
    }
    if (a.rhos.empty()) return true;
    const Tolerance tol{rtol * max_modulus(b.rhos), rtol};
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < b.rhos.size(); ++i)
        if (std::abs(b.rhos[i]) > std::abs(b.rhos[anchor])) anchor = i;
    std::vector<cplx> scaled(a.rhos.size());
    for (const cplx& r : a.rhos) {
        if (r == cplx{0.0}) continue;
        const cplx s = b.rhos[anchor] / r;
        for (std::size_t i = 0; i < a.rhos.size(); ++i) scaled[i] = s * a.rhos[i];
        if (multiset_equal(scaled, b.rhos, tol)) return true;
    }
    // All-zero multisets are equal to each other.
    return max_modulus(a.rhos) == 0.0 && max_modulus(b.rhos) == 0.0;
}

struct HPCanonical {
    std::vector<cplx> tuple;  // type III: (1, sorted rho_l / rho_0^p); type II: sorted, max element 1
    std::string key;
    bool degenerate = false;
};

/// Canonical representative of the scaling class; keys coincide exactly on hp_equal pairs.
/// Degenerate invariants (a zero rho) get a key that records the zero pattern.
inline HPCanonical hp_canonical(const HPInvariant& a, double zero_rtol = 1e-10) {
    HPCanonical out;
    const std::string head = std::string(to_string(a.germ_type)) + ":" + std::to_string(a.weights.p) + "," +
                             std::to_string(a.weights.q) + "," + std::to_string(a.n);
    out.degenerate = detail::is_degenerate(a, zero_rtol);
    if (out.degenerate) {
        const double top = std::max(max_modulus(a.rhos), a.rho0 ? std::abs(*a.rho0) : 0.0);
        std::vector<cplx> nonzero;
        int zeros = 0;
        for (const cplx& r : a.rhos) {
            if (std::abs(r) <= zero_rtol * top) ++zeros;
            else nonzero.push_back(r);
        }
        const bool rho0_zero = a.rho0 && std::abs(*a.rho0) <= zero_rtol * top;
        std::string pattern = "degenerate:rho0=" + std::string(a.rho0 ? (rho0_zero ? "0" : "*") : "-") +
                              ":zeros=" + std::to_string(zeros);
        if (a.rho0 && !rho0_zero) {
            const cplx scale = std::pow(*a.rho0, a.weights.p);
            for (cplx& r : nonzero) r /= scale;
            canonical_sort(nonzero);
        } else {
            nonzero = detail::scale_normal_form(nonzero);
        }
        out.tuple = nonzero;
        out.key = detail::key_of(head + ":" + pattern, snap_all(nonzero));
        return out;
    }
    if (a.germ_type == GermType::III) {
        std::vector<cplx> normalized = detail::rho0_normalized(a);
        canonical_sort(normalized);
        out.tuple.push_back(1.0);
        out.tuple.insert(out.tuple.end(), normalized.begin(), normalized.end());
    } else {
        out.tuple = detail::scale_normal_form(a.rhos);
    }
    out.key = detail::key_of(head, snap_all(out.tuple));
    return out;
}

/// Applies the weighted scaling action with parameter xi (the orbit hp_equal quotients by).
inline HPInvariant scale_invariant(const HPInvariant& a, cplx xi) {
    HPInvariant out = a;
    const int qn = a.weights.q * a.n;
    if (a.germ_type == GermType::III) {
        *out.rho0 *= std::pow(xi, qn);
        const cplx f = std::pow(xi, a.weights.p * qn);
        for (cplx& r : out.rhos) r *= f;
    } else {
        const cplx f = std::pow(xi, qn);
        for (cplx& r : out.rhos) r *= f;
    }
    return out;
}

}  // namespace qhm

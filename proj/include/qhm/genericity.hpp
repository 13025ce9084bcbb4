#pragma once

// Membership in the local bifurcation set B_L (Q' and Q'' share a root) and the semi-local set
// B_G (two distinct critical points share a critical value), and the genericity predicate.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"

namespace qhm {

struct BifurcationConfig {
    double tol = 1e-8;               // relative to the coefficient scale
    double borderline_factor = 1e3;  // values within this factor of tol are flagged borderline
    RootFinderConfig roots{};
};

struct BifurcationReport {
    bool in_BL = false;
    bool in_BG = false;
    bool borderline = false;
    std::optional<cplx> bl_witness;                 // root t0 of Q'' where |Q'(t0)| is smallest
    double bl_measure = std::numeric_limits<double>::infinity();
    double bl_resultant = 0.0;                      // normalized resultant(Q', Q'')
    std::optional<std::pair<cplx, cplx>> bg_witness;  // critical points with the closest values
    double bg_measure = std::numeric_limits<double>::infinity();
    double tol = 1e-8;

    [[nodiscard]] bool generic() const noexcept { return !in_BL && !in_BG; }
};

namespace detail {

/// Coefficient scale of p near t: max|a_k| * max(1, |t|)^deg.
inline double coefficient_scale(const ComplexPoly& p, cplx t) {
    return p.max_coeff_modulus() * std::pow(std::max(1.0, std::abs(t)), p.degree());
}

inline bool near(double measure, const BifurcationConfig& cfg) {
    return measure > cfg.tol / cfg.borderline_factor && measure <= cfg.tol * cfg.borderline_factor;
}

inline void require_degree(const ComplexPoly& q) {
    if (q.is_zero() || q.degree() < 2) throw InputError("bifurcation tests need deg Q >= 2");
}

inline void local_check(const ComplexPoly& q, const BifurcationConfig& cfg, BifurcationReport& out) {
    const ComplexPoly d1 = derivative(q);
    const ComplexPoly d2 = derivative(d1);
    out.tol = cfg.tol;
    if (d2.degree() >= 1) out.bl_resultant = std::abs(normalized_resultant(d1, d2));
    if (d2.degree() < 1) return;  // deg Q = 2: Q'' is a nonzero constant
    for (const cplx& t0 : roots(d2, cfg.roots).roots) {
        const double m = std::abs(d1(t0)) / coefficient_scale(d1, t0);
        if (m < out.bl_measure) {
            out.bl_measure = m;
            out.bl_witness = t0;
        }
    }
    out.in_BL = out.bl_measure <= cfg.tol;
    out.borderline = out.borderline || near(out.bl_measure, cfg);
}

inline void semilocal_check(const ComplexPoly& q, const BifurcationConfig& cfg, BifurcationReport& out) {
    const RootMultiset kappas = roots(derivative(q), cfg.roots);
    const auto clusters = kappas.clusters();
    out.tol = cfg.tol;
    for (std::size_t a = 0; a < clusters.size(); ++a)
        for (std::size_t b = a + 1; b < clusters.size(); ++b) {
            const cplx t1 = clusters[a].center;
            const cplx t2 = clusters[b].center;
            const double scale = std::max(coefficient_scale(q, t1), coefficient_scale(q, t2));
            const double m = std::abs(q(t1) - q(t2)) / scale;
            if (m < out.bg_measure) {
                out.bg_measure = m;
                out.bg_witness = std::pair{t1, t2};
            }
        }
    out.in_BG = out.bg_measure <= cfg.tol;
    out.borderline = out.borderline || near(out.bg_measure, cfg);
}

}  // namespace detail

/// Q' and Q'' have a common root (a degenerate critical point), decided at the roots of Q''.
inline BifurcationReport in_local_bifurcation(const ComplexPoly& q, const BifurcationConfig& cfg = {}) {
    detail::require_degree(q);
    BifurcationReport out;
    detail::local_check(q, cfg, out);
    return out;
}

/// Two distinct critical points with the same critical value.
inline BifurcationReport in_semilocal_bifurcation(const ComplexPoly& q, const BifurcationConfig& cfg = {}) {
    detail::require_degree(q);
    BifurcationReport out;
    detail::semilocal_check(q, cfg, out);
    return out;
}

/// Outside B_L and B_G: n - 1 distinct critical points with pairwise distinct critical values.
/// A non-commode germ is judged by its commode part.
inline BifurcationReport is_generic(const QHFunction& f, const BifurcationConfig& cfg = {}) {
    const ComplexPoly q = q_of_f(commode_reduce(f));
    BifurcationReport out;
    if (q.degree() < 2) return out;
    detail::local_check(q, cfg, out);
    detail::semilocal_check(q, cfg, out);
    return out;
}

}  // namespace qhm

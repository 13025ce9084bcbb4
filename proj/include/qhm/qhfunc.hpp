#pragma once

// Reduced quasi-homogeneous germs in the normal form
//     f(x, y) = x^m y^k prod_j (y^p - lambda_j x^q),
// their type stratification, the correspondence f <-> Q_lambda and polar curves.

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/poly.hpp"

namespace qhm {

enum class GermType { I, II, III };

inline const char* to_string(GermType t) {
    switch (t) {
        case GermType::I: return "I";
        case GermType::II: return "II";
        case GermType::III: return "III";
    }
    return "?";
}

inline GermType germ_type_from_string(const std::string& s) {
    if (s == "I") return GermType::I;
    if (s == "II") return GermType::II;
    if (s == "III") return GermType::III;
    throw InputError("unknown germ type '" + s + "' (expected I, II or III)");
}

struct Weights {
    int p = 1;
    int q = 1;

    Weights() = default;
    Weights(int p_, int q_) : p(p_), q(q_) {
        if (p < 1 || q < 1) throw InputError("weights must be positive");
        if (p > q) throw InputError("weights must satisfy p <= q");
        if (std::gcd(p, q) != 1) throw InputError("weights must be coprime");
    }

    [[nodiscard]] GermType germ_type() const noexcept {
        if (p == 1 && q == 1) return GermType::I;
        if (p == 1) return GermType::II;
        return GermType::III;
    }

    friend bool operator==(const Weights&, const Weights&) = default;
};

struct Classification {
    GermType type;
    bool commode;
};

/// A reduced germ stored by its root data; coefficient tables are derived on demand.
class QHFunction {
public:
    QHFunction(Weights w, int m, int k, std::vector<cplx> lambdas, const Tolerance& tol = {})
        : weights_(w), m_(m), k_(k), lambdas_(std::move(lambdas)) {
        if (m_ != 0 && m_ != 1) throw InputError("m must be 0 or 1");
        if (k_ != 0 && k_ != 1) throw InputError("k must be 0 or 1");
        if (k_ == 1 && weights_.p == 1) throw InputError("k must be 0 when p = 1 (types I and II)");
        if (lambdas_.empty()) throw InputError("a germ needs at least one lambda");
        for (std::size_t i = 0; i < lambdas_.size(); ++i) {
            if (lambdas_[i] == cplx{0.0} || std::abs(lambdas_[i]) <= tol.atol)
                throw InputError("lambda_" + std::to_string(i + 1) + " is zero; lambdas must be nonzero");
            for (std::size_t j = 0; j < i; ++j)
                if (tol.close(lambdas_[i], lambdas_[j]))
                    throw InputError("lambdas " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                                     " coincide; the germ would not be reduced");
        }
    }

    [[nodiscard]] const Weights& weights() const noexcept { return weights_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] int k() const noexcept { return k_; }
    [[nodiscard]] int n() const noexcept { return static_cast<int>(lambdas_.size()); }
    [[nodiscard]] const std::vector<cplx>& lambdas() const noexcept { return lambdas_; }
    [[nodiscard]] GermType germ_type() const noexcept { return weights_.germ_type(); }
    [[nodiscard]] bool is_commode() const noexcept { return m_ == 0 && k_ == 0; }

    /// p*i + q*j for every monomial x^i y^j; n*p*q for the commode part.
    [[nodiscard]] int weighted_degree() const noexcept {
        return n() * weights_.p * weights_.q + m_ * weights_.p + k_ * weights_.q;
    }

private:
    Weights weights_;
    int m_;
    int k_;
    std::vector<cplx> lambdas_;
};

inline Classification classify(const QHFunction& f) { return {f.germ_type(), f.is_commode()}; }

inline QHFunction commode_reduce(const QHFunction& f) {
    return QHFunction(f.weights(), 0, 0, f.lambdas());
}

/// Q_lambda(t) = prod (t - lambda_j), the polynomial with f = x^{nq} Q(y^p / x^q) on the commode part.
inline ComplexPoly q_of_f(const QHFunction& f) { return from_roots(f.lambdas()); }

/// Inverse of q_of_f: the commode germ with weights w whose lambdas are the roots of Q.
inline QHFunction f_of_q(const ComplexPoly& q, Weights w, const RootFinderConfig& cfg = {}) {
    if (q.is_zero() || q.degree() < 1) throw InputError("f_of_q: Q must have degree >= 1");
    const Tolerance tol{};
    if (!tol.close(q.leading(), cplx{1.0})) throw InputError("f_of_q: Q must be monic");
    if (std::abs(q.coeff(0)) <= 1e-12 * q.max_coeff_modulus())
        throw InputError("f_of_q: Q(0) = 0, a zero lambda is not allowed");
    RootMultiset r = roots(q, cfg);
    if (!r.all_simple()) throw InputError("f_of_q: Q has a multiple root; the germ would not be reduced");
    return QHFunction(w, 0, 0, std::move(r.roots));
}

/// A monomial table of a bivariate polynomial: (i, j) -> coefficient of x^i y^j.
using BivariatePoly = std::map<std::pair<int, int>, cplx>;

inline BivariatePoly multiply(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) out[{ea.first + eb.first, ea.second + eb.second}] += ca * cb;
    return out;
}

inline BivariatePoly d_dy(const BivariatePoly& f) {
    BivariatePoly out;
    for (const auto& [e, c] : f)
        if (e.second > 0) out[{e.first, e.second - 1}] += c * static_cast<double>(e.second);
    return out;
}

/// Coefficient table of x^m y^k prod_j (y^p - lambda_j x^q), built from the expansion of Q.
inline BivariatePoly expand(const QHFunction& f) {
    const ComplexPoly q = q_of_f(f);
    const int n = f.n();
    const int p = f.weights().p;
    const int qw = f.weights().q;
    BivariatePoly out;
    for (int l = 0; l <= n; ++l) {
        const cplx c = q.coeff(static_cast<std::size_t>(l));
        if (c == cplx{0.0}) continue;
        out[{qw * (n - l) + f.m(), p * l + f.k()}] += c;
    }
    return out;
}

/// Whether every nonzero monomial x^i y^j has p*i + q*j equal to one common d; returns d.
inline std::optional<int> weighted_degree_check(const BivariatePoly& f, Weights w) {
    std::optional<int> d;
    for (const auto& [e, c] : f) {
        if (c == cplx{0.0}) continue;
        const int dd = w.p * e.first + w.q * e.second;
        if (d && *d != dd) return std::nullopt;
        d = dd;
    }
    return d;
}

/// x = 0 is not in the tangent cone: the table has a nonzero pure-y monomial.
inline bool is_miniregular_in_y(const BivariatePoly& f) {
    for (const auto& [e, c] : f)
        if (e.first == 0 && c != cplx{0.0}) return true;
    return false;
}

struct PolarBranch {
    cplx kappa;
    cplx alpha;  // principal p-th root of kappa; gamma(s) = (s^p, alpha s^q)
};

struct PolarCurve {
    RootMultiset kappas;                // the n - 1 critical points of Q_lambda
    bool has_y_branch = false;          // y = 0, present iff p > 1; gamma_0(s) = (s, 0)
    std::vector<PolarBranch> branches;  // one per nonzero kappa, with multiplicity

    /// Number of polar branches y^p = kappa x^q with kappa != 0.
    [[nodiscard]] int r() const noexcept { return static_cast<int>(branches.size()); }
};

/// Magnitude below which a critical point counts as kappa = 0.
inline double zero_kappa_threshold(const RootMultiset& kappas, std::span<const cplx> lambdas) {
    return kappas.cluster_radius * std::max(1.0, max_modulus(lambdas));
}

inline PolarCurve polar_curve(const QHFunction& f, const RootFinderConfig& cfg = {}) {
    const QHFunction g = f.is_commode() ? f : commode_reduce(f);
    PolarCurve out;
    const ComplexPoly dq = derivative(q_of_f(g));
    if (dq.degree() >= 1) {
        out.kappas = roots(dq, cfg);
    } else {
        out.kappas.cluster_radius = cfg.cluster_radius;
    }
    out.has_y_branch = g.weights().p > 1;
    const double zero = zero_kappa_threshold(out.kappas, g.lambdas());
    const double p = static_cast<double>(g.weights().p);
    for (const cplx& kappa : out.kappas.roots) {
        if (std::abs(kappa) <= zero) continue;
        out.branches.push_back({kappa, std::pow(kappa, 1.0 / p)});
    }
    return out;
}

}  // namespace qhm

#pragma once

// Root configurations modulo the analytic group actions: centering, unit-product
// normalization, the lambda <-> kappa correspondence, equivalence deciders for the three germ
// types, Z_n orbits and canonical forms.

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"

namespace qhm {

enum class Space { Plane, Punctured, Sphere };

inline const char* to_string(Space s) {
    switch (s) {
        case Space::Plane: return "C";
        case Space::Punctured: return "C*";
        case Space::Sphere: return "P1";
    }
    return "?";
}

/// An unordered configuration of pairwise distinct points. Sphere configurations may contain
/// the point at infinity, stored as a flag next to the finite points.
class Configuration {
public:
    Configuration(Space space, std::vector<cplx> points, bool has_infinity = false,
                  const Tolerance& tol = {})
        : space_(space), points_(std::move(points)), has_infinity_(has_infinity) {
        if (has_infinity_ && space_ != Space::Sphere)
            throw InputError("only configurations in P1 may contain infinity");
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (space_ == Space::Punctured && std::abs(points_[i]) <= tol.atol)
                throw InputError("configuration in C* contains 0");
            for (std::size_t j = 0; j < i; ++j)
                if (tol.close(points_[i], points_[j]))
                    throw InputError("configuration points " + std::to_string(j + 1) + " and " +
                                     std::to_string(i + 1) + " coincide");
        }
    }

    [[nodiscard]] Space space() const noexcept { return space_; }
    [[nodiscard]] const std::vector<cplx>& points() const noexcept { return points_; }
    [[nodiscard]] bool has_infinity() const noexcept { return has_infinity_; }
    [[nodiscard]] int size() const noexcept {
        return static_cast<int>(points_.size()) + (has_infinity_ ? 1 : 0);
    }

    [[nodiscard]] cplx sum() const {
        cplx s{0.0};
        for (const cplx& z : points_) s += z;
        return s;
    }

    [[nodiscard]] cplx product() const {
        cplx s{1.0};
        for (const cplx& z : points_) s *= z;
        return s;
    }

    /// The centered subspace W_0: sum of points = 0.
    [[nodiscard]] bool is_centered(double tol = 1e-10) const {
        return std::abs(sum()) <= tol * std::max(1.0, max_modulus(points_));
    }

    /// Product of points = 1.
    [[nodiscard]] bool has_unit_product(double tol = 1e-10) const {
        return std::abs(product() - cplx{1.0}) <= tol;
    }

private:
    Space space_;
    std::vector<cplx> points_;
    bool has_infinity_;
};

/// Configuration of the lambdas of a germ in the space its analytic moduli live in:
/// P1 for type I (with infinity for the x = 0 line when m = 1), C for type II, C* for type III.
inline Configuration configuration_of(const QHFunction& f) {
    switch (f.germ_type()) {
        case GermType::I: return Configuration(Space::Sphere, f.lambdas(), f.m() == 1);
        case GermType::II: return Configuration(Space::Plane, f.lambdas());
        case GermType::III: return Configuration(Space::Punctured, f.lambdas());
    }
    throw InputError("unknown germ type");
}

/// A group element acting on configurations. Mobius maps are stored as a 2x2 matrix
/// [[a, b], [c, d]]; affine maps use (a, b); scalings use a; roots of unity use (s, n).
struct Transformation {
    enum class Kind { Affine, Scaling, Mobius, RootOfUnity };

    Kind kind = Kind::Scaling;
    cplx a{1.0};
    cplx b{0.0};
    cplx c{0.0};
    cplx d{1.0};
    int s = 0;
    int n = 1;

    static Transformation affine(cplx a, cplx b) {
        if (a == cplx{0.0}) throw InputError("affine map needs a != 0");
        return {Kind::Affine, a, b, 0.0, 1.0, 0, 1};
    }
    static Transformation scaling(cplx a) {
        if (a == cplx{0.0}) throw InputError("scaling needs a != 0");
        return {Kind::Scaling, a, 0.0, 0.0, 1.0, 0, 1};
    }
    static Transformation mobius(cplx a, cplx b, cplx c, cplx d) {
        const cplx det = a * d - b * c;
        if (det == cplx{0.0}) throw InputError("Mobius map needs a nonzero determinant");
        const cplx r = std::sqrt(det);
        return {Kind::Mobius, a / r, b / r, c / r, d / r, 0, 1};
    }
    static Transformation root_of_unity(int s, int n) {
        if (n < 1) throw InputError("root of unity needs n >= 1");
        const int ss = ((s % n) + n) % n;
        return {Kind::RootOfUnity, qhm::root_of_unity(ss, n), 0.0, 0.0, 1.0, ss, n};
    }

    /// Image of a finite point; for Mobius maps a pole yields nullopt (infinity).
    [[nodiscard]] std::optional<cplx> apply(cplx z) const {
        if (kind != Kind::Mobius) return a * z + b;
        const cplx den = c * z + d;
        const cplx num = a * z + b;
        if (std::abs(den) <= 1e-14 * std::abs(num)) return std::nullopt;
        return num / den;
    }

    /// Image of infinity (nullopt = infinity).
    [[nodiscard]] std::optional<cplx> apply_infinity() const {
        if (kind != Kind::Mobius || std::abs(c) <= 1e-14 * std::abs(a)) return std::nullopt;
        return a / c;
    }

    [[nodiscard]] Transformation inverse() const {
        switch (kind) {
            case Kind::Affine: return affine(1.0 / a, -b / a);
            case Kind::Scaling: return scaling(1.0 / a);
            case Kind::RootOfUnity: return root_of_unity(-s, n);
            case Kind::Mobius: return mobius(d, -b, -c, a);
        }
        return *this;
    }

    [[nodiscard]] Configuration apply(const Configuration& cfg) const {
        std::vector<cplx> out;
        bool inf = false;
        for (const cplx& z : cfg.points()) {
            const auto w = apply(z);
            if (w) out.push_back(*w);
            else inf = true;
        }
        if (cfg.has_infinity()) {
            const auto w = apply_infinity();
            if (w) out.push_back(*w);
            else inf = true;
        }
        Space space = cfg.space();
        if (kind == Kind::Mobius) space = Space::Sphere;
        else if (kind == Kind::Affine && space == Space::Punctured) space = Space::Plane;
        return Configuration(space, std::move(out), inf);
    }
};

/// Lambda - mean(lambda): the representative in the centered subspace; Phi(a l + b) = a Phi(l).
inline Configuration center(const Configuration& c) {
    if (c.space() == Space::Sphere) throw InputError("center: configuration must lie in C");
    const cplx mean = c.sum() / static_cast<double>(c.points().size());
    std::vector<cplx> out;
    out.reserve(c.points().size());
    for (const cplx& z : c.points()) out.push_back(z - mean);
    return Configuration(Space::Plane, std::move(out));
}

/// Lambda / (principal n-th root of prod lambda): the representative with unit product.
inline Configuration unit_product(const Configuration& c) {
    if (c.has_infinity()) throw InputError("unit_product: configuration contains infinity");
    for (const cplx& z : c.points())
        if (z == cplx{0.0}) throw InputError("unit_product: configuration contains 0");
    const double n = static_cast<double>(c.points().size());
    const cplx root = std::pow(c.product(), 1.0 / n);
    std::vector<cplx> out;
    out.reserve(c.points().size());
    for (const cplx& z : c.points()) out.push_back(z / root);
    return Configuration(c.space(), std::move(out));
}

/// The n - 1 critical points of Q_lambda. On centered unit-product configurations this is the
/// isomorphism onto centered kappa-tuples; it is defined (and used) on any configuration.
inline RootMultiset kappa_of_lambda(const Configuration& c, const RootFinderConfig& cfg = {}) {
    if (c.has_infinity()) throw InputError("kappa_of_lambda: configuration contains infinity");
    const ComplexPoly q = from_roots(c.points());
    if (q.degree() < 2) {
        RootMultiset empty;
        empty.cluster_radius = cfg.cluster_radius;
        return empty;
    }
    return roots(derivative(q), cfg);
}

/// The monic degree-n polynomial with critical points kappa and constant term (-1)^n sigma_n:
///   Q(t) = t^n + sum_{l=1}^{n-1} (-1)^l n/(n-l) sigma_l(kappa) t^{n-l} + (-1)^n sigma_n.
inline ComplexPoly lambda_of_kappa(std::span<const cplx> kappa, int n, cplx sigma_n = 1.0) {
    if (n < 1 || static_cast<int>(kappa.size()) != n - 1)
        throw InputError("lambda_of_kappa: expected n - 1 critical points");
    const std::vector<cplx> sigma = elementary_symmetric(kappa);
    std::vector<cplx> a(static_cast<std::size_t>(n) + 1, cplx{0.0});
    a[static_cast<std::size_t>(n)] = 1.0;
    for (int l = 1; l <= n - 1; ++l) {
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        a[static_cast<std::size_t>(n - l)] =
            sign * (static_cast<double>(n) / static_cast<double>(n - l)) * sigma[static_cast<std::size_t>(l)];
    }
    a[0] = ((n % 2 == 0) ? 1.0 : -1.0) * sigma_n;
    return ComplexPoly(std::move(a));
}

/// True iff v = exp(2 pi i s / n) u as multisets for some s in {0..n-1}; returns that s.
inline std::optional<int> zn_orbit_shift(std::span<const cplx> u, std::span<const cplx> v, int n,
                                         const Tolerance& tol = {1e-8, 1e-8}) {
    if (u.size() != v.size()) return std::nullopt;
    std::vector<cplx> rotated(u.size());
    for (int s = 0; s < n; ++s) {
        const cplx w = root_of_unity(s, n);
        for (std::size_t i = 0; i < u.size(); ++i) rotated[i] = w * u[i];
        if (multiset_equal(rotated, v, tol)) return s;
    }
    return std::nullopt;
}

inline bool zn_orbit_equal(std::span<const cplx> u, std::span<const cplx> v, int n,
                           const Tolerance& tol = {1e-8, 1e-8}) {
    return zn_orbit_shift(u, v, n, tol).has_value();
}

struct EquivalenceResult {
    bool equivalent = false;
    std::optional<Transformation> witness;  // maps a onto b when equivalent
};

namespace detail {

/// Homogeneous coordinates [z0 : z1] of a point of P1; infinity is [1 : 0].
using Hom = std::array<cplx, 2>;

inline std::vector<Hom> homogeneous(const Configuration& c) {
    std::vector<Hom> out;
    for (const cplx& z : c.points()) out.push_back({z, cplx{1.0}});
    if (c.has_infinity()) out.push_back({cplx{1.0}, cplx{0.0}});
    return out;
}

/// Chordal distance on the Riemann sphere.
inline double chordal(const Hom& u, const Hom& v) {
    const double nu = std::hypot(std::abs(u[0]), std::abs(u[1]));
    const double nv = std::hypot(std::abs(v[0]), std::abs(v[1]));
    return std::abs(u[0] * v[1] - u[1] * v[0]) / (nu * nv);
}

using Mat2 = std::array<cplx, 4>;  // row-major [[m0, m1], [m2, m3]]

inline Hom mul(const Mat2& m, const Hom& u) { return {m[0] * u[0] + m[1] * u[1], m[2] * u[0] + m[3] * u[1]}; }

inline Mat2 mul(const Mat2& x, const Mat2& y) {
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

inline Mat2 inverse(const Mat2& m) {
    const cplx det = m[0] * m[3] - m[1] * m[2];
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

/// The Mobius matrix sending u1 -> 0, u2 -> 1, u3 -> infinity.
inline Mat2 to_standard_triple(const Hom& u1, const Hom& u2, const Hom& u3) {
    // N = [c3 u3 | c1 u1] maps infinity -> u3, 0 -> u1 and 1 -> c3 u3 + c1 u1 = u2.
    const cplx det = u3[0] * u1[1] - u1[0] * u3[1];
    const cplx c3 = (u2[0] * u1[1] - u1[0] * u2[1]) / det;
    const cplx c1 = (u3[0] * u2[1] - u2[0] * u3[1]) / det;
    const Mat2 n{c3 * u3[0], c1 * u1[0], c3 * u3[1], c1 * u1[1]};
    return inverse(n);
}

/// Pads fewer than three points with fixed auxiliary points far from them (chordally).
inline std::vector<Hom> complete_triple(std::vector<Hom> pts) {
    const std::array<Hom, 6> extra{Hom{0.0, 1.0}, Hom{1.0, 1.0}, Hom{1.0, 0.0},
                                   Hom{-1.0, 1.0}, Hom{2.0, 1.0}, Hom{cplx{0.0, 1.0}, 1.0}};
    for (const Hom& e : extra) {
        if (pts.size() >= 3) break;
        bool clear = true;
        for (const Hom& p : pts) clear = clear && chordal(p, e) > 0.1;
        if (clear) pts.push_back(e);
    }
    return pts;
}

inline bool hom_multiset_equal(const std::vector<Hom>& a, const std::vector<Hom>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const Hom& x : a) {
        std::size_t best = b.size();
        double best_d = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = chordal(x, b[j]);
            if (best == b.size() || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best_d > tol) return false;
        used[best] = true;
    }
    return true;
}

inline std::string key_of(const std::string& prefix, std::span<const GridPoint> pts) {
    std::ostringstream os;
    os << prefix;
    for (const GridPoint& g : pts) os << ";" << g.re << "," << g.im;
    return os.str();
}

/// Among candidate tuples, the one whose snapped sorted form is lexicographically smallest.
inline std::vector<cplx> lexicographic_min(std::vector<std::vector<cplx>> candidates) {
    std::vector<cplx> best;
    std::vector<GridPoint> best_key;
    bool have = false;
    for (auto& cand : candidates) {
        canonical_sort(cand);
        std::vector<GridPoint> key = snap_all(cand);
        if (!have || key < best_key) {
            best = cand;
            best_key = std::move(key);
            have = true;
        }
    }
    return best;
}

/// Scale so a maximal-modulus point becomes 1. Near-ties in modulus are resolved by trying each
/// tied point and keeping the lexicographically smallest result.
inline std::vector<cplx> scale_normal_form(std::span<const cplx> pts, double tie_rtol = 1e-9) {
    const double top = max_modulus(pts);
    if (top == 0.0) return {pts.begin(), pts.end()};
    std::vector<std::vector<cplx>> candidates;
    for (const cplx& pivot : pts) {
        if (std::abs(pivot) < top * (1.0 - tie_rtol)) continue;
        std::vector<cplx> scaled;
        for (const cplx& z : pts) scaled.push_back(z / pivot);
        candidates.push_back(std::move(scaled));
    }
    return lexicographic_min(std::move(candidates));
}

}  // namespace detail

/// Decides analytic equivalence of two root configurations for the given germ type:
/// type III by a scaling, type II by an affine map, type I by a Mobius map.
inline EquivalenceResult equivalent(const Configuration& a, const Configuration& b, GermType type,
                                    double rtol = 1e-8) {
    if (a.size() != b.size()) return {};
    const int n = a.size();

    if (type == GermType::III) {
        if (a.has_infinity() || b.has_infinity()) throw InputError("type III configurations lie in C*");
        const auto& pa = a.points();
        const auto& pb = b.points();
        const Tolerance tol{rtol * std::max(1.0, max_modulus(pb)), rtol};
        std::size_t anchor = 0;
        for (std::size_t i = 1; i < pb.size(); ++i)
            if (std::abs(pb[i]) > std::abs(pb[anchor])) anchor = i;
        std::vector<cplx> scaled(pa.size());
        for (const cplx& z : pa) {
            if (z == cplx{0.0}) continue;
            const cplx s = pb[anchor] / z;
            for (std::size_t i = 0; i < pa.size(); ++i) scaled[i] = s * pa[i];
            if (multiset_equal(scaled, pb, tol)) return {true, Transformation::scaling(s)};
        }
        return {};
    }

    if (type == GermType::II) {
        if (a.has_infinity() || b.has_infinity()) throw InputError("type II configurations lie in C");
        const cplx mean_a = a.sum() / static_cast<double>(n);
        const cplx mean_b = b.sum() / static_cast<double>(n);
        if (n == 1) return {true, Transformation::affine(1.0, mean_b - mean_a)};
        const Configuration ca = center(a);
        const Configuration cb = center(b);
        const auto& pa = ca.points();
        const auto& pb = cb.points();
        const Tolerance tol{rtol * std::max(1.0, max_modulus(pb)), rtol};
        std::size_t anchor = 0;
        for (std::size_t i = 1; i < pb.size(); ++i)
            if (std::abs(pb[i]) > std::abs(pb[anchor])) anchor = i;
        std::vector<cplx> scaled(pa.size());
        for (const cplx& z : pa) {
            if (std::abs(z) <= tol.atol) continue;
            const cplx s = pb[anchor] / z;
            for (std::size_t i = 0; i < pa.size(); ++i) scaled[i] = s * pa[i];
            if (multiset_equal(scaled, pb, tol)) return {true, Transformation::affine(s, mean_b - s * mean_a)};
        }
        return {};
    }

    // Type I: PSL(2, C) is sharply 3-transitive, so fixing an ordered triple of b and trying
    // every ordered triple of a is a complete search.
    const auto ha = detail::homogeneous(a);
    const auto hb = detail::homogeneous(b);
    if (n < 3) {
        const auto ta = detail::complete_triple(ha);
        const auto tb = detail::complete_triple(hb);
        const detail::Mat2 m = detail::mul(detail::inverse(detail::to_standard_triple(tb[0], tb[1], tb[2])),
                                           detail::to_standard_triple(ta[0], ta[1], ta[2]));
        return {true, Transformation::mobius(m[0], m[1], m[2], m[3])};
    }
    const detail::Mat2 to_b = detail::to_standard_triple(hb[0], hb[1], hb[2]);
    const detail::Mat2 from_std_to_b = detail::inverse(to_b);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const detail::Mat2 m = detail::mul(from_std_to_b, detail::to_standard_triple(ha[i], ha[j], ha[k]));
                std::vector<detail::Hom> image;
                image.reserve(ha.size());
                for (const auto& u : ha) image.push_back(detail::mul(m, u));
                if (detail::hom_multiset_equal(image, hb, rtol))
                    return {true, Transformation::mobius(m[0], m[1], m[2], m[3])};
            }
    return {};
}

/// Germ-level analytic equivalence: same weights, same n, same (m, k) flags, and equivalent
/// root configurations.
inline EquivalenceResult equivalent(const QHFunction& f, const QHFunction& g, double rtol = 1e-8) {
    if (!(f.weights() == g.weights()) || f.n() != g.n() || f.m() != g.m() || f.k() != g.k()) return {};
    return equivalent(configuration_of(f), configuration_of(g), f.germ_type(), rtol);
}

struct CanonicalForm {
    std::vector<cplx> tuple;  // canonical ordered representative (finite points)
    std::string key;          // bit-identical for equivalent configurations
};

/// A representative invariant under the type's group action and under permutations.
/// Type III: scale a maximal-modulus point to 1, sort. Type II: center, then the type III rule.
/// Type I: send an ordered triple to (0, 1, infinity), keeping the lexicographically smallest
/// image of the remaining points over all triples.
inline CanonicalForm canonical_form(const Configuration& c, GermType type) {
    CanonicalForm out;
    const int n = c.size();
    if (type == GermType::III) {
        out.tuple = detail::scale_normal_form(c.points());
        out.key = detail::key_of("III:" + std::to_string(n), snap_all(out.tuple));
        return out;
    }
    if (type == GermType::II) {
        out.tuple = n > 1 ? detail::scale_normal_form(center(c).points()) : std::vector<cplx>{cplx{0.0}};
        out.key = detail::key_of("II:" + std::to_string(n), snap_all(out.tuple));
        return out;
    }
    const auto h = detail::homogeneous(c);
    if (n <= 3) {
        out.key = "I:" + std::to_string(n);
        return out;
    }
    std::vector<std::vector<cplx>> candidates;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i == j || j == k || i == k) continue;
                const detail::Mat2 m = detail::to_standard_triple(h[i], h[j], h[k]);
                std::vector<cplx> rest;
                for (int r = 0; r < n; ++r) {
                    if (r == i || r == j || r == k) continue;
                    const detail::Hom w = detail::mul(m, h[r]);
                    rest.push_back(w[0] / w[1]);
                }
                candidates.push_back(std::move(rest));
            }
    out.tuple = detail::lexicographic_min(std::move(candidates));
    out.key = detail::key_of("I:" + std::to_string(n), snap_all(out.tuple));
    return out;
}

}  // namespace qhm

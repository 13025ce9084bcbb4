#pragma once

// Complex univariate polynomials: evaluation, calculus, Vieta expansion, simultaneous
// root finding and Sylvester resultants.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"

namespace qhm {

/// Dense polynomial, coefficients ascending by degree. Trailing (leading) zero coefficients
/// are trimmed on construction so that degree() == coeffs().size() - 1 always holds; the zero
/// polynomial is stored as the single coefficient 0 and reports degree 0.
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{cplx{0.0}} {}

    explicit ComplexPoly(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) {
        trim();
    }

    ComplexPoly(std::initializer_list<cplx> ascending) : coeffs_(ascending) { trim(); }

    /// Monomial c * t^k.
    static ComplexPoly monomial(std::size_t k, cplx c = 1.0) {
        std::vector<cplx> a(k + 1, cplx{0.0});
        a[k] = c;
        return ComplexPoly(std::move(a));
    }

    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] bool is_zero() const noexcept {
        return coeffs_.size() == 1 && coeffs_[0] == cplx{0.0};
    }
    [[nodiscard]] std::span<const cplx> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] cplx coeff(std::size_t k) const noexcept {
        return k < coeffs_.size() ? coeffs_[k] : cplx{0.0};
    }
    [[nodiscard]] cplx leading() const noexcept { return coeffs_.back(); }

    /// Horner evaluation.
    [[nodiscard]] cplx operator()(cplx t) const noexcept {
        cplx acc{0.0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    /// sum_k |a_k| |t|^k, the magnitude scale of a rounding-error bound for evaluation at t.
    [[nodiscard]] double eval_bound(cplx t) const noexcept {
        const double r = std::abs(t);
        double acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
        return acc;
    }

    [[nodiscard]] double max_coeff_modulus() const noexcept { return max_modulus(coeffs_); }

    [[nodiscard]] ComplexPoly derivative() const {
        if (coeffs_.size() == 1) return ComplexPoly{};
        std::vector<cplx> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            d[k - 1] = coeffs_[k] * static_cast<double>(k);
        return ComplexPoly(std::move(d));
    }

    [[nodiscard]] ComplexPoly scaled(cplx s) const {
        std::vector<cplx> a = coeffs_;
        for (cplx& c : a) c *= s;
        return ComplexPoly(std::move(a));
    }

    [[nodiscard]] ComplexPoly monic() const {
        if (is_zero()) throw InputError("cannot normalize the zero polynomial");
        return scaled(1.0 / leading());
    }

    friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{0.0});
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
        return a + b.scaled(-1.0);
    }

    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
        std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{0.0});
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ComplexPoly(std::move(c));
    }

private:
    void trim() {
        if (coeffs_.empty()) coeffs_.push_back(cplx{0.0});
        while (coeffs_.size() > 1 && coeffs_.back() == cplx{0.0}) coeffs_.pop_back();
    }

    std::vector<cplx> coeffs_;
};

inline cplx eval(const ComplexPoly& p, cplx t) { return p(t); }

inline ComplexPoly derivative(const ComplexPoly& p) { return p.derivative(); }

/// (sigma_0, ..., sigma_n) of the given points via the incremental product recurrence.
inline std::vector<cplx> elementary_symmetric(std::span<const cplx> points) {
    std::vector<cplx> e(points.size() + 1, cplx{0.0});
    e[0] = 1.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (std::size_t j = k + 1; j >= 1; --j) e[j] += points[k] * e[j - 1];
    }
    return e;
}

/// leading * prod (t - r_j); coefficient of t^{n-j} is leading * (-1)^j * sigma_j(r).
/// Coefficients below their own rounding error, 4 n eps sigma_j(|r|), are set to exactly 0, so
/// that e.g. the n-th roots of unity give t^n - 1 and not t^n + O(eps) t^k - 1.
inline ComplexPoly from_roots(std::span<const cplx> roots, cplx leading = 1.0) {
    if (leading == cplx{0.0}) throw InputError("from_roots: leading coefficient must be nonzero");
    const std::vector<cplx> sigma = elementary_symmetric(roots);
    std::vector<cplx> moduli;
    moduli.reserve(roots.size());
    for (const cplx& r : roots) moduli.emplace_back(std::abs(r));
    const std::vector<cplx> bound = elementary_symmetric(moduli);
    const std::size_t n = roots.size();
    const double noise = 4.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    std::vector<cplx> a(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        const cplx s = std::abs(sigma[j]) <= noise * bound[j].real() ? cplx{0.0} : sigma[j];
        a[n - j] = leading * sign * s;
    }
    return ComplexPoly(std::move(a));
}

struct RootCluster {
    cplx center;
    int multiplicity = 1;
};

/// Roots with repetition, as produced by a root finder, plus the radius used to decide when two
/// of them count as one root of higher multiplicity.
struct RootMultiset {
    std::vector<cplx> roots;
    double cluster_radius = 1e-6;
    bool converged = true;
    int iterations = 0;

    [[nodiscard]] std::size_t size() const noexcept { return roots.size(); }

    /// Radius scaled to the configuration: cluster_radius * max(1, max |root|).
    [[nodiscard]] double effective_radius() const noexcept {
        return cluster_radius * std::max(1.0, max_modulus(roots));
    }

    /// Groups near-coincident roots (single linkage). Centers are cluster means; clusters are
    /// returned in canonical order.
    [[nodiscard]] std::vector<RootCluster> clusters() const {
        const std::size_t n = roots.size();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t i) {
            while (parent[i] != i) i = parent[i] = parent[parent[i]];
            return i;
        };
        const double radius = effective_radius();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (std::abs(roots[i] - roots[j]) <= radius) parent[find(i)] = find(j);

        std::vector<RootCluster> out;
        std::vector<std::size_t> slot(n, n);
        std::vector<cplx> sums;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = find(i);
            if (slot[r] == n) {
                slot[r] = out.size();
                out.push_back({cplx{0.0}, 0});
                sums.push_back(cplx{0.0});
            }
            sums[slot[r]] += roots[i];
            ++out[slot[r]].multiplicity;
        }
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k].center = sums[k] / static_cast<double>(out[k].multiplicity);
        std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
            return canonical_less(a.center, b.center);
        });
        return out;
    }

    [[nodiscard]] bool all_simple() const {
        const auto cs = clusters();
        return std::all_of(cs.begin(), cs.end(), [](const RootCluster& c) { return c.multiplicity == 1; });
    }
};

struct RootFinderConfig {
    int max_iterations = 1000;
    double cluster_radius = 1e-6;
};

namespace detail {

/// Fujiwara's bound on the moduli of the roots of a monic polynomial.
inline double fujiwara_bound(std::span<const cplx> monic_ascending) {
    const std::size_t n = monic_ascending.size() - 1;
    double bound = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
        double a = std::abs(monic_ascending[n - j]);
        if (j == n) a /= 2.0;
        bound = std::max(bound, std::pow(a, 1.0 / static_cast<double>(j)));
    }
    return 2.0 * bound;
}

}  // namespace detail

/// All complex roots of p with multiplicity, by Aberth-Ehrlich simultaneous iteration started
/// on a rotated circle of Fujiwara radius. Exact zero roots (vanishing low coefficients) are
/// split off first. A root is accepted once |p(z)| is within a small multiple of the rounding
/// bound eps * sum |a_k| |z|^k. Roots come back in canonical order.
inline RootMultiset roots(const ComplexPoly& p, const RootFinderConfig& cfg = {}) {
    if (p.is_zero() || p.degree() < 1) throw InputError("roots: polynomial must have degree >= 1");

    RootMultiset out;
    out.cluster_radius = cfg.cluster_radius;

    std::size_t zeros = 0;
    while (p.coeff(zeros) == cplx{0.0}) ++zeros;
    out.roots.assign(zeros, cplx{0.0});

    std::vector<cplx> a(p.coeffs().begin() + static_cast<std::ptrdiff_t>(zeros), p.coeffs().end());
    const cplx lead = a.back();
    for (cplx& c : a) c /= lead;
    const ComplexPoly q(a);
    const std::size_t n = q.degree();

    if (n == 1) {
        out.roots.push_back(-a[0]);
    } else if (n > 1) {
        const ComplexPoly dq = q.derivative();
        const double radius = std::max(detail::fujiwara_bound(a), std::numeric_limits<double>::min());
        std::vector<cplx> z(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
            z[k] = std::polar(radius, angle);
        }
        std::vector<bool> done(n, false);
        constexpr double eps = std::numeric_limits<double>::epsilon();
        int it = 0;
        bool all_done = false;
        for (; it < cfg.max_iterations && !all_done; ++it) {
            all_done = true;
            for (std::size_t k = 0; k < n; ++k) {
                if (done[k]) continue;
                const cplx pv = q(z[k]);
                if (std::abs(pv) <= 8.0 * eps * q.eval_bound(z[k])) {
                    done[k] = true;
                    continue;
                }
                all_done = false;
                const cplx dpv = dq(z[k]);
                cplx repulsion{0.0};
                for (std::size_t j = 0; j < n; ++j)
                    if (j != k) repulsion += 1.0 / (z[k] - z[j]);
                cplx w;
                if (dpv == cplx{0.0}) {
                    w = std::polar(radius * 1e-3, static_cast<double>(it));
                } else {
                    const cplx ratio = pv / dpv;
                    w = ratio / (1.0 - ratio * repulsion);
                }
                z[k] -= w;
                if (std::abs(w) <= eps * std::abs(z[k])) done[k] = true;
            }
        }
        out.iterations = it;
        out.converged = all_done || std::all_of(done.begin(), done.end(), [](bool b) { return b; });
        out.roots.insert(out.roots.end(), z.begin(), z.end());
    }
    canonical_sort(out.roots);
    return out;
}

/// Determinant of the Sylvester matrix of p and q.
inline cplx resultant(const ComplexPoly& p, const ComplexPoly& q) {
    if (p.is_zero() || q.is_zero()) throw InputError("resultant: both polynomials must be nonzero");
    const std::size_t m = p.degree();
    const std::size_t n = q.degree();
    if (m == 0) return std::pow(p.coeff(0), static_cast<double>(n));
    if (n == 0) return std::pow(q.coeff(0), static_cast<double>(m));
    const auto size = static_cast<Eigen::Index>(m + n);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
    for (std::size_t row = 0; row < n; ++row)
        for (std::size_t k = 0; k <= m; ++k)
            s(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row + k)) = p.coeff(m - k);
    for (std::size_t row = 0; row < m; ++row)
        for (std::size_t k = 0; k <= n; ++k)
            s(static_cast<Eigen::Index>(n + row), static_cast<Eigen::Index>(row + k)) = q.coeff(n - k);
    return s.partialPivLu().determinant();
}

/// Resultant of the coefficient-normalized (max |a_k| = 1) polynomials; a scale-free quantity
/// suitable for zero tests.
inline cplx normalized_resultant(const ComplexPoly& p, const ComplexPoly& q) {
    return resultant(p.scaled(1.0 / p.max_coeff_modulus()), q.scaled(1.0 / q.max_coeff_modulus()));
}

}  // namespace qhm

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace qhm {

using cplx = std::complex<double>;

/// Scale-aware closeness: |a - b| <= atol + rtol * max(|a|, |b|).
struct Tolerance {
    double atol = 1e-9;
    double rtol = 1e-9;

    [[nodiscard]] bool close(cplx a, cplx b) const noexcept {
        return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
    }
};

/// exp(2 pi i s / n)
inline cplx root_of_unity(int s, int n) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(n);
    return std::polar(1.0, angle);
}

/// Argument mapped into [0, 2 pi).
inline double argument_0_2pi(cplx z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
}

inline double max_modulus(std::span<const cplx> values) {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
}

/// A complex scalar rounded to a fixed grid; the total order used for canonical sorting.
struct GridPoint {
    std::int64_t re = 0;
    std::int64_t im = 0;

    friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

inline constexpr double kDefaultGrid = 1e-7;

inline GridPoint snap(cplx z, double grid = kDefaultGrid) {
    return {static_cast<std::int64_t>(std::llround(z.real() / grid)),
            static_cast<std::int64_t>(std::llround(z.imag() / grid))};
}

inline std::vector<GridPoint> snap_all(std::span<const cplx> values, double grid = kDefaultGrid) {
    std::vector<GridPoint> out;
    out.reserve(values.size());
    for (const cplx& v : values) out.push_back(snap(v, grid));
    return out;
}

/// Lexicographic (Re, Im) after snapping; ties fall back to the exact values so the order is total.
inline bool canonical_less(cplx a, cplx b, double grid = kDefaultGrid) {
    const GridPoint ga = snap(a, grid);
    const GridPoint gb = snap(b, grid);
    if (ga != gb) return ga < gb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline void canonical_sort(std::vector<cplx>& values, double grid = kDefaultGrid) {
    std::sort(values.begin(), values.end(),
              [grid](cplx a, cplx b) { return canonical_less(a, b, grid); });
}

/// Multiset equality up to a tolerance. Points inside one configuration are assumed to be
/// separated by more than the tolerance, so a greedy nearest match is exact.
inline bool multiset_equal(std::span<const cplx> a, std::span<const cplx> b, const Tolerance& tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const cplx& x : a) {
        std::size_t best = b.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b[j]);
            if (best == b.size() || d < best_dist) {
                best = j;
                best_dist = d;
            }
        }
        if (best == b.size() || !tol.close(x, b[best])) return false;
        used[best] = true;
    }
    return true;
}

/// Largest distance between matched elements of two multisets (optimal for small sizes via
/// greedy nearest matching); infinity when sizes differ.
inline double multiset_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const cplx& x : a) {
        std::size_t best = b.size();
        double best_dist = 0.0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b[j]);
            if (best == b.size() || d < best_dist) {
                best = j;
                best_dist = d;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

}  // namespace qhm

#pragma once

// Random generators and independent reference computations for the tests.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qhm/complex.hpp"

namespace qhm::testing {

using cplx = std::complex<double>;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    cplx gaussian() {
        std::normal_distribution<double> n;
        return {n(eng_), n(eng_)};
    }
    cplx unit() { return std::polar(1.0, uniform(0.0, 6.283185307179586)); }

    /// n points, pairwise at least `gap` apart, drawn from a complex Gaussian.
    std::vector<cplx> distinct_points(int n, double gap = 0.05) {
        std::vector<cplx> out;
        while (static_cast<int>(out.size()) < n) {
            const cplx z = gaussian();
            bool ok = std::abs(z) > gap;
            for (const cplx& w : out) ok = ok && std::abs(z - w) > gap;
            if (ok) out.push_back(z);
        }
        return out;
    }

private:
    std::mt19937_64 eng_;
};

/// Coefficients of prod (t - r_j), ascending, by repeated multiplication with linear factors.
inline std::vector<cplx> expand_roots(const std::vector<cplx>& r) {
    std::vector<cplx> c{1.0};
    for (const cplx& z : r) {
        std::vector<cplx> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= z * c[i];
        }
        c = next;
    }
    return c;
}

/// sigma_l by brute force over all subsets (small inputs only).
inline std::vector<cplx> brute_symmetric(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> s(n + 1, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        cplx prod = 1.0;
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1U) {
                prod *= x[i];
                ++bits;
            }
        s[static_cast<std::size_t>(bits)] += prod;
    }
    return s;
}

/// Greedy nearest matching distance between two equal-size multisets.
inline double match_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return 1e300;
    double worst = 0.0;
    for (const cplx& z : a) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < b.size(); ++j)
            if (std::abs(b[j] - z) < std::abs(b[best] - z)) best = j;
        worst = std::max(worst, std::abs(b[best] - z));
        b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return worst;
}

}  // namespace qhm::testing

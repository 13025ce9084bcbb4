#pragma once

// The maps kappa -> rho sending critical points of Q_kappa (normalized to prod lambda = 1) to its
// critical values, and their inversion by total-degree homotopy continuation.
//
//   type III: unknowns kappa_1..kappa_{n-1},             rho_j = Q_kappa(kappa_j), j < n
//   type II : unknowns kappa_1..kappa_{n-2},             kappa_{n-1} = -sum(kappa_free),
//             rho_j = Q_kappa(kappa_j), j <= n - 2; rho_{n-1} is an auxiliary output.
//
// Every equation has degree n, so the Bezout number is n^(n-2) (II) or n^(n-1) (III).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/hp.hpp"
#include "qhm/moduli.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"

namespace qhm {

struct FiberTarget {
    GermType germ_type = GermType::III;
    int n = 3;
    std::vector<cplx> targets;  // rho_1..rho_{n-2} (II) or rho_1..rho_{n-1} (III)

    /// Number of unknowns and equations.
    [[nodiscard]] int dimension() const noexcept { return germ_type == GermType::II ? n - 2 : n - 1; }

    void validate() const {
        if (germ_type == GermType::I) throw UnsupportedTypeError("fibers are defined for type II and III only");
        if (germ_type == GermType::II && n < 3) throw InputError("type II fibers need n >= 3");
        if (germ_type == GermType::III && n < 2) throw InputError("type III fibers need n >= 2");
        if (n > 8) throw InputError("fiber solving is limited to n <= 8");
        if (static_cast<int>(targets.size()) != dimension())
            throw InputError("target must have " + std::to_string(dimension()) + " entries for type " +
                             to_string(germ_type) + ", n = " + std::to_string(n));
    }
};

struct SolverConfig {
    std::uint64_t seed = 42;
    double step_initial = 0.01;
    double step_min = 1e-7;
    double step_max = 0.1;
    double corrector_tolerance = 1e-12;
    int max_corrector_iterations = 3;
    int max_polish_iterations = 100;
    double cluster_radius = 1e-6;
    double divergence_bound = 1e8;
    double endgame_threshold = 0.99;
    double residual_tolerance = 1e-8;
    double merge_residual = 1e-12;
    double singular_cluster_radius = 1e-4;  // search radius for copies of a multiple root
    double group_residual = 1e-8;           // residual allowed at the centroid of such copies
    int max_retracks = 3;
    int max_restarts = 2;
    long max_steps_per_path = 100000;

    void validate() const {
        if (!(step_min > 0.0) || !(step_initial >= step_min) || !(step_max >= step_initial))
            throw InputError("solver steps must satisfy 0 < step_min <= step_initial <= step_max");
        if (!(corrector_tolerance > 0.0) || !(cluster_radius > 0.0) || !(residual_tolerance > 0.0) ||
            !(singular_cluster_radius > 0.0) || !(group_residual > 0.0))
            throw InputError("solver tolerances must be positive");
        if (max_corrector_iterations < 1 || max_polish_iterations < 1)
            throw InputError("iteration limits must be positive");
    }
};

/// kappa with kappa_{n-1} = -sum(free) appended (type II) or as is (type III).
inline std::vector<cplx> full_kappa(GermType type, std::span<const cplx> unknowns) {
    std::vector<cplx> k(unknowns.begin(), unknowns.end());
    if (type == GermType::II) {
        cplx s{0.0};
        for (const cplx& z : unknowns) s += z;
        k.push_back(-s);
    }
    return k;
}

/// Q_kappa with the prod lambda = 1 normalization.
inline ComplexPoly q_of_kappa(std::span<const cplx> kappa) {
    return lambda_of_kappa(kappa, static_cast<int>(kappa.size()) + 1, 1.0);
}

struct UpsilonIIResult {
    std::vector<cplx> values;  // rho_1..rho_{n-2}
    cplx auxiliary;            // rho_{n-1} = Q_kappa(kappa_{n-1})
};

inline UpsilonIIResult upsilon_II(std::span<const cplx> kappa_free) {
    const std::vector<cplx> k = full_kappa(GermType::II, kappa_free);
    const ComplexPoly q = q_of_kappa(k);
    UpsilonIIResult out;
    for (std::size_t j = 0; j < kappa_free.size(); ++j) out.values.push_back(q(k[j]));
    out.auxiliary = q(k.back());
    return out;
}

inline std::vector<cplx> upsilon_III(std::span<const cplx> kappa) {
    const ComplexPoly q = q_of_kappa(kappa);
    std::vector<cplx> out;
    out.reserve(kappa.size());
    for (const cplx& z : kappa) out.push_back(q(z));
    return out;
}

/// Forward map in the unknowns of the given type.
inline std::vector<cplx> upsilon(GermType type, std::span<const cplx> unknowns) {
    if (type == GermType::II) return upsilon_II(unknowns).values;
    if (type == GermType::III) return upsilon_III(unknowns);
    throw UnsupportedTypeError("upsilon is defined for type II and III only");
}

namespace detail {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// The square system P(x) = Upsilon(x) - target with its analytic Jacobian.
class UpsilonSystem {
public:
    UpsilonSystem(GermType type, int n, std::vector<cplx> target)
        : type_(type), n_(n), dim_(type == GermType::II ? n - 2 : n - 1), target_(std::move(target)) {}

    [[nodiscard]] int dimension() const noexcept { return dim_; }
    [[nodiscard]] int degree() const noexcept { return n_; }

    /// Largest target modulus, floored at 1; residuals are measured relative to it.
    [[nodiscard]] double scale() const noexcept { return std::max(1.0, max_modulus(target_)); }

    void evaluate(const Vec& x, Vec& value, Mat* jacobian) const {
        std::vector<cplx> unknowns(x.data(), x.data() + x.size());
        const std::vector<cplx> k = full_kappa(type_, unknowns);
        const std::size_t m = k.size();  // n - 1
        const ComplexPoly q = q_of_kappa(k);
        value.resize(dim_);
        for (int j = 0; j < dim_; ++j) value(j) = q(k[static_cast<std::size_t>(j)]) - target_[static_cast<std::size_t>(j)];
        if (jacobian == nullptr) return;

        const ComplexPoly dq = q.derivative();
        // d/dkappa_i of the coefficient polynomial: sum_l (-1)^l n/(n-l) sigma_{l-1}(kappa \ kappa_i) t^{n-l}
        std::vector<ComplexPoly> dcoef(m);
        std::vector<cplx> rest;
        rest.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            rest.clear();
            for (std::size_t r = 0; r < m; ++r)
                if (r != i) rest.push_back(k[r]);
            const std::vector<cplx> sig = elementary_symmetric(rest);
            std::vector<cplx> a(static_cast<std::size_t>(n_) + 1, cplx{0.0});
            for (int l = 1; l <= n_ - 1; ++l) {
                const double sign = (l % 2 == 0) ? 1.0 : -1.0;
                a[static_cast<std::size_t>(n_ - l)] =
                    sign * (static_cast<double>(n_) / static_cast<double>(n_ - l)) * sig[static_cast<std::size_t>(l - 1)];
            }
            dcoef[i] = ComplexPoly(std::move(a));
        }
        Mat full(dim_, static_cast<Eigen::Index>(m));
        for (int j = 0; j < dim_; ++j) {
            const cplx kj = k[static_cast<std::size_t>(j)];
            for (std::size_t i = 0; i < m; ++i) {
                cplx v = dcoef[i](kj);
                if (static_cast<int>(i) == j) v += dq(kj);
                full(j, static_cast<Eigen::Index>(i)) = v;
            }
        }
        if (type_ == GermType::II) {
            jacobian->resize(dim_, dim_);
            const auto last = static_cast<Eigen::Index>(m - 1);
            for (int i = 0; i < dim_; ++i) jacobian->col(i) = full.col(i) - full.col(last);
        } else {
            *jacobian = full;
        }
    }

private:
    GermType type_;
    int n_;
    int dim_;
    std::vector<cplx> target_;
};

/// Portable uniform double in [0, 1) from a 64-bit engine.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct PathResult {
    Vec endpoint;
    bool finite = false;
    bool diverged = false;
    bool failed = false;
    bool singular = false;
    double residual = 0.0;
    double last_step = 0.0;
    double blur = 0.0;  // rounding-level uncertainty of the endpoint
    long steps = 0;
};

/// Convex homotopy H(x, t) = (1 - t) gamma G(x) + t P(x) with start system G_j = x_j^n - r_j.
class Homotopy {
public:
    Homotopy(const UpsilonSystem& target, std::vector<cplx> r, cplx gamma)
        : sys_(target), r_(std::move(r)), gamma_(gamma) {}

    void evaluate(const Vec& x, double t, Vec& h, Mat& hx, Vec* ht) const {
        Vec p;
        Mat jp;
        sys_.evaluate(x, p, &jp);
        const int d = sys_.dimension();
        const int n = sys_.degree();
        Vec g(d);
        hx = t * jp;
        for (int j = 0; j < d; ++j) {
            const cplx xn1 = std::pow(x(j), n - 1);
            g(j) = xn1 * x(j) - r_[static_cast<std::size_t>(j)];
            hx(j, j) += (1.0 - t) * gamma_ * static_cast<double>(n) * xn1;
        }
        h = (1.0 - t) * gamma_ * g + t * p;
        if (ht) *ht = p - gamma_ * g;
    }

    /// dx/dt = -H_x^{-1} H_t; empty on a singular Jacobian.
    [[nodiscard]] std::optional<Vec> velocity(const Vec& x, double t) const {
        Vec h, ht;
        Mat hx;
        evaluate(x, t, h, hx, &ht);
        Vec v = hx.partialPivLu().solve(-ht);
        if (!v.allFinite()) return std::nullopt;
        return v;
    }

    [[nodiscard]] const UpsilonSystem& target() const noexcept { return sys_; }

private:
    const UpsilonSystem& sys_;
    std::vector<cplx> r_;
    cplx gamma_;
};

inline double norm_inf(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

/// Newton on P from x until the step stops shrinking; classifies the endpoint.
inline void polish(const UpsilonSystem& sys, Vec& x, const SolverConfig& cfg, PathResult& out) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    Vec p;
    Mat j;
    double prev_step = std::numeric_limits<double>::infinity();
    int growth = 0;
    double last = std::numeric_limits<double>::infinity();
    Vec best = x;
    double best_res = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.max_polish_iterations; ++it) {
        sys.evaluate(x, p, &j);
        const double res = norm_inf(p) / sys.scale();
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        Vec dx = j.partialPivLu().solve(p);
        if (!dx.allFinite()) break;
        const double step = norm_inf(dx);
        x -= dx;
        last = step;
        if (step <= 4.0 * eps * (1.0 + norm_inf(x))) break;
        if (step >= prev_step) {
            if (++growth >= 3) break;
        } else {
            growth = 0;
        }
        prev_step = step;
        if (norm_inf(x) > cfg.divergence_bound) break;
    }
    sys.evaluate(x, p, nullptr);
    double res = norm_inf(p) / sys.scale();
    if (!(res <= best_res) || !x.allFinite()) {
        x = best;
        res = best_res;
    }
    out.endpoint = x;
    out.residual = res;
    out.last_step = std::isfinite(last) ? last : 0.0;
    // Rounding in P is about eps * scale; through J^{-1} that blurs the endpoint by
    // ||J^{-1}|| eps scale, which is tiny at simple roots and large near multiple ones.
    sys.evaluate(x, p, &j);
    Eigen::FullPivLU<Mat> lu(j);
    double blur = std::numeric_limits<double>::infinity();
    if (lu.isInvertible()) {
        const Mat inv = lu.inverse();
        if (inv.allFinite()) blur = inv.cwiseAbs().rowwise().sum().maxCoeff() * 64.0 * eps * sys.scale();
    }
    out.blur = std::isfinite(blur) ? blur : std::max(norm_inf(x), 1.0);
    out.singular = !(last <= 1e-10 * (1.0 + norm_inf(x))) || out.blur > 1e-10 * (1.0 + norm_inf(x));
    if (res <= cfg.residual_tolerance && x.allFinite()) {
        out.finite = true;
    } else if (!x.allFinite() || norm_inf(x) > std::sqrt(cfg.divergence_bound)) {
        out.diverged = true;
    } else {
        out.failed = true;
    }
}

/// Tracks one path from t = 0 to t = 1: RK4 predictor, Newton corrector, step halving on
/// failure and doubling after five consecutive successes.
inline PathResult track(const Homotopy& hom, Vec x, const SolverConfig& cfg, double step_scale) {
    PathResult out;
    double t = 0.0;
    double h = cfg.step_initial * step_scale;
    const double hmax = cfg.step_max * step_scale;
    const double hmin = cfg.step_min;
    int successes = 0;
    Vec hv, unused;
    Mat hx;
    while (t < 1.0) {
        if (++out.steps > cfg.max_steps_per_path) break;
        if (norm_inf(x) > cfg.divergence_bound) {
            out.diverged = true;
            out.endpoint = x;
            return out;
        }
        h = std::min(h, 1.0 - t);
        bool ok = false;
        Vec xc;
        if (auto k1 = hom.velocity(x, t)) {
            auto k2 = hom.velocity(x + 0.5 * h * *k1, t + 0.5 * h);
            auto k3 = k2 ? hom.velocity(x + 0.5 * h * *k2, t + 0.5 * h) : std::nullopt;
            auto k4 = k3 ? hom.velocity(x + h * *k3, t + h) : std::nullopt;
            if (k4) {
                xc = x + (h / 6.0) * (*k1 + 2.0 * *k2 + 2.0 * *k3 + *k4);
                const double t1 = std::min(1.0, t + h);
                double prev = std::numeric_limits<double>::infinity();
                for (int it = 0; it < cfg.max_corrector_iterations; ++it) {
                    hom.evaluate(xc, t1, hv, hx, nullptr);
                    Vec dx = hx.partialPivLu().solve(hv);
                    if (!dx.allFinite()) break;
                    const double step = norm_inf(dx);
                    if (it > 0 && step > 0.5 * prev) break;
                    xc -= dx;
                    prev = step;
                    if (step <= cfg.corrector_tolerance * (1.0 + norm_inf(xc))) {
                        ok = true;
                        break;
                    }
                }
            }
        }
        if (ok) {
            x = xc;
            t = (h >= 1.0 - t) ? 1.0 : t + h;
            if (++successes >= 5) {
                h = std::min(2.0 * h, hmax);
                successes = 0;
            }
        } else {
            h *= 0.5;
            successes = 0;
            if (h < hmin) break;
        }
    }
    if (t >= 1.0 || t > cfg.endgame_threshold) {
        polish(hom.target(), x, cfg, out);
    } else {
        out.endpoint = x;
        out.failed = true;
    }
    return out;
}

}  // namespace detail

struct FiberSolution {
    std::vector<cplx> kappa;  // full critical-point tuple (n - 1 entries)
    double residual = 0.0;
    int multiplicity = 1;
    bool singular = false;
};

struct Fiber {
    FiberTarget target;
    std::vector<FiberSolution> solutions;   // distinct finite solutions, canonical order
    std::vector<std::vector<int>> orbits;   // Z_n orbits as indices into solutions
    long bezout = 0;
    int diverged = 0;                       // paths that went to infinity
    int failed = 0;                         // paths left unresolved
    int retracked = 0;
    int restarts = 0;                       // extra homotopies run to recover jumped paths
    bool degenerate = false;
    std::vector<std::string> degenerate_reasons;

    [[nodiscard]] bool incomplete() const noexcept { return failed > 0; }

    [[nodiscard]] long finite_mass() const noexcept {
        long m = 0;
        for (const auto& s : solutions) m += s.multiplicity;
        return m;
    }
};

namespace detail {

inline long ipow(long base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

inline std::vector<GridPoint> tuple_key(std::span<const cplx> k) { return snap_all(k); }

}  // namespace detail

inline long bezout_number(GermType type, int n) {
    return detail::ipow(n, type == GermType::II ? n - 2 : n - 1);
}

/// Z_n orbits of a list of kappa tuples (multiset semantics), as index groups in first-seen order.
inline std::vector<std::vector<int>> zn_orbits(const std::vector<std::vector<cplx>>& tuples, int n,
                                               double rtol = 1e-6) {
    std::vector<std::vector<int>> out;
    std::vector<bool> assigned(tuples.size(), false);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        if (assigned[i]) continue;
        std::vector<int> orbit{static_cast<int>(i)};
        assigned[i] = true;
        const Tolerance tol{rtol * std::max(1.0, max_modulus(tuples[i])), rtol};
        for (std::size_t j = i + 1; j < tuples.size(); ++j) {
            if (assigned[j]) continue;
            if (zn_orbit_equal(tuples[i], tuples[j], n, tol)) {
                orbit.push_back(static_cast<int>(j));
                assigned[j] = true;
            }
        }
        out.push_back(std::move(orbit));
    }
    return out;
}

/// Solves Upsilon(kappa) = target by tracking all Bezout-many paths of a total-degree homotopy.
inline Fiber solve_fiber(const FiberTarget& target, const SolverConfig& cfg = {}) {
    target.validate();
    cfg.validate();
    const int n = target.n;
    const int dim = target.dimension();
    const detail::UpsilonSystem sys(target.germ_type, n, target.targets);

    Fiber fiber;
    fiber.target = target;
    fiber.bezout = bezout_number(target.germ_type, n);
    std::mt19937_64 rng(cfg.seed);

    auto same_point = [&](const detail::Vec& a, const detail::Vec& b) {
        return detail::norm_inf(a - b) <= cfg.cluster_radius * (1.0 + detail::norm_inf(a));
    };
    // Paths that failed, or that share a nonsingular endpoint with an earlier path (one of
    // them jumped).
    auto suspects = [&](const std::vector<detail::PathResult>& res) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < res.size(); ++i) {
            const auto& a = res[i];
            if (a.failed) {
                out.push_back(i);
                continue;
            }
            if (!a.finite || a.singular) continue;
            for (std::size_t j = 0; j < i; ++j)
                if (res[j].finite && !res[j].singular && same_point(a.endpoint, res[j].endpoint)) {
                    out.push_back(i);
                    break;
                }
        }
        return out;
    };

    // One total-degree homotopy with a fresh start system; suspect paths are retracked with
    // smaller steps.
    auto run = [&]() {
        std::vector<cplx> r(static_cast<std::size_t>(dim));
        for (cplx& z : r) z = std::polar(1.0, 2.0 * std::numbers::pi * detail::uniform01(rng));
        const cplx gamma = std::polar(1.0, 2.0 * std::numbers::pi * detail::uniform01(rng));
        const detail::Homotopy hom(sys, r, gamma);

        // Start points: x_j = r_j^{1/n} exp(2 pi i k_j / n) over all multi-indices k.
        std::vector<detail::Vec> starts;
        starts.reserve(static_cast<std::size_t>(fiber.bezout));
        std::vector<int> idx(static_cast<std::size_t>(dim), 0);
        for (long path = 0; path < fiber.bezout; ++path) {
            detail::Vec x(dim);
            for (int j = 0; j < dim; ++j) {
                const cplx base = std::pow(r[static_cast<std::size_t>(j)], 1.0 / n);
                x(j) = base * root_of_unity(idx[static_cast<std::size_t>(j)], n);
            }
            starts.push_back(std::move(x));
            for (int j = 0; j < dim; ++j) {
                if (++idx[static_cast<std::size_t>(j)] < n) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
        }
        std::vector<detail::PathResult> res;
        res.reserve(starts.size());
        for (const auto& x : starts) res.push_back(detail::track(hom, x, cfg, 1.0));
        for (int attempt = 1; attempt <= cfg.max_retracks; ++attempt) {
            const auto bad = suspects(res);
            if (bad.empty()) break;
            for (std::size_t i : bad) {
                res[i] = detail::track(hom, starts[i], cfg, std::pow(0.1, attempt));
                ++fiber.retracked;
            }
        }
        return res;
    };

    std::vector<detail::PathResult> results = run();
    auto is_new = [&](const detail::PathResult& cand) {
        if (!cand.finite || cand.singular) return false;
        return std::none_of(results.begin(), results.end(), [&](const detail::PathResult& e) {
            return e.finite && same_point(cand.endpoint, e.endpoint);
        });
    };
    // Remaining suspects are replaced by solutions no path reached: first rotations of known
    // solutions (the fiber is invariant under kappa -> xi kappa, xi^n = 1), then endpoints of
    // homotopies with fresh start systems.
    auto fill = [&](std::vector<std::size_t>& bad, detail::PathResult cand) {
        if (bad.empty() || !is_new(cand)) return;
        results[bad.back()] = std::move(cand);
        bad.pop_back();
    };
    {
        auto bad = suspects(results);
        for (std::size_t i = 0; i < results.size() && !bad.empty(); ++i) {
            if (!results[i].finite || results[i].singular) continue;
            for (int sh = 1; sh < n && !bad.empty(); ++sh) {
                detail::Vec x = results[i].endpoint * root_of_unity(sh, n);
                detail::PathResult rot;
                detail::polish(sys, x, cfg, rot);
                fill(bad, std::move(rot));
            }
        }
    }
    for (int restart = 0; restart < cfg.max_restarts; ++restart) {
        auto bad = suspects(results);
        if (bad.empty()) break;
        ++fiber.restarts;
        for (detail::PathResult& cand : run()) fill(bad, std::move(cand));
    }

    // Cluster finite endpoints. Singular endpoints are only accurate to roughly n times their
    // final Newton step or rounding blur, so their radius grows accordingly.
    std::vector<std::size_t> finite;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].finite) finite.push_back(i);
        else if (results[i].diverged) ++fiber.diverged;
        else ++fiber.failed;
    }
    const std::size_t m = finite.size();
    std::vector<double> err(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto& pr = results[finite[a]];
        err[a] = cfg.cluster_radius * (1.0 + detail::norm_inf(pr.endpoint));
        if (pr.singular) err[a] += static_cast<double>(n) * (pr.last_step + pr.blur);
    }
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b) {
            const double d = detail::norm_inf(results[finite[a]].endpoint - results[finite[b]].endpoint);
            if (d > err[a] + err[b]) continue;
            // Copies of one multiple root keep a rounding-level residual between them; two
            // distinct ill-conditioned roots do not.
            if (results[finite[a]].singular || results[finite[b]].singular) {
                const detail::Vec mid = 0.5 * (results[finite[a]].endpoint + results[finite[b]].endpoint);
                detail::Vec val;
                sys.evaluate(mid, val, nullptr);
                if (detail::norm_inf(val) / sys.scale() > cfg.merge_residual) continue;
            }
            parent[find(a)] = find(b);
        }
    // Copies of a root of multiplicity m >= 3 spread like eps^(1/m), beyond the pairwise test
    // above, and two of them need not have a small residual at their midpoint. Their centroid
    // does, unlike the centroid of distinct nearby roots: merge whole groups of singular
    // endpoints on that test.
    {
        std::vector<std::size_t> cand(m);
        std::iota(cand.begin(), cand.end(), std::size_t{0});
        auto cfind = [&](std::size_t i) {
            while (cand[i] != i) i = cand[i] = cand[cand[i]];
            return i;
        };
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                if (!results[finite[a]].singular || !results[finite[b]].singular) continue;
                const detail::Vec& xa = results[finite[a]].endpoint;
                if (detail::norm_inf(xa - results[finite[b]].endpoint) <= cfg.singular_cluster_radius * (1.0 + detail::norm_inf(xa)))
                    cand[cfind(a)] = cfind(b);
            }
        std::vector<std::vector<std::size_t>> members(m);
        for (std::size_t a = 0; a < m; ++a) members[cfind(a)].push_back(a);
        for (const auto& g : members) {
            if (g.size() < 2) continue;
            bool split = false;
            for (std::size_t a : g) split = split || find(a) != find(g.front());
            if (!split) continue;
            detail::Vec centroid = detail::Vec::Zero(dim);
            for (std::size_t a : g) centroid += results[finite[a]].endpoint;
            centroid /= static_cast<double>(g.size());
            detail::Vec val;
            sys.evaluate(centroid, val, nullptr);
            if (detail::norm_inf(val) / sys.scale() > cfg.group_residual) continue;
            for (std::size_t a : g) parent[find(a)] = find(g.front());
        }
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::size_t> slot(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t root = find(a);
        if (slot[root] == m) {
            slot[root] = groups.size();
            groups.emplace_back();
        }
        groups[slot[root]].push_back(a);
    }
    for (const auto& g : groups) {
        detail::Vec center = detail::Vec::Zero(dim);
        bool singular = false;
        for (std::size_t a : g) {
            center += results[finite[a]].endpoint;
            singular = singular || results[finite[a]].singular;
        }
        center /= static_cast<double>(g.size());
        detail::Vec val;
        sys.evaluate(center, val, nullptr);
        FiberSolution sol;
        std::vector<cplx> unknowns(center.data(), center.data() + center.size());
        sol.kappa = full_kappa(target.germ_type, unknowns);
        sol.residual = detail::norm_inf(val) / sys.scale();
        sol.multiplicity = static_cast<int>(g.size());
        sol.singular = singular || g.size() > 1;
        fiber.solutions.push_back(std::move(sol));
    }
    std::sort(fiber.solutions.begin(), fiber.solutions.end(), [](const FiberSolution& a, const FiberSolution& b) {
        const auto ka = detail::tuple_key(a.kappa);
        const auto kb = detail::tuple_key(b.kappa);
        if (ka != kb) return ka < kb;
        return a.multiplicity < b.multiplicity;
    });

    std::vector<std::vector<cplx>> tuples;
    for (const auto& s : fiber.solutions) tuples.push_back(s.kappa);
    fiber.orbits = zn_orbits(tuples, n);

    const double zero = 1e-10 * std::max(1.0, max_modulus(target.targets));
    for (std::size_t j = 0; j < target.targets.size(); ++j)
        if (std::abs(target.targets[j]) <= zero)
            fiber.degenerate_reasons.push_back("target entry rho_" + std::to_string(j + 1) + " is zero");
    for (std::size_t i = 0; i < fiber.solutions.size(); ++i)
        if (fiber.solutions[i].multiplicity > 1)
            fiber.degenerate_reasons.push_back("solution " + std::to_string(i) + " has multiplicity " +
                                               std::to_string(fiber.solutions[i].multiplicity));
    fiber.degenerate = !fiber.degenerate_reasons.empty();
    return fiber;
}

struct DegeneracyReport {
    bool degenerate = false;
    std::vector<std::string> reasons;
};

inline DegeneracyReport is_degenerate_target(const FiberTarget& target, const Fiber& fiber) {
    DegeneracyReport out;
    const double zero = 1e-10 * std::max(1.0, max_modulus(target.targets));
    for (std::size_t j = 0; j < target.targets.size(); ++j)
        if (std::abs(target.targets[j]) <= zero)
            out.reasons.push_back("target entry rho_" + std::to_string(j + 1) + " is zero");
    for (std::size_t i = 0; i < fiber.solutions.size(); ++i)
        if (fiber.solutions[i].multiplicity > 1)
            out.reasons.push_back("solution " + std::to_string(i) + " has multiplicity " +
                                  std::to_string(fiber.solutions[i].multiplicity));
    out.degenerate = !out.reasons.empty();
    return out;
}

struct ClassRecord {
    std::vector<cplx> kappa;    // orbit representative
    ComplexPoly q;              // Q_lambda, prod lambda = sigma_n
    std::vector<cplx> lambdas;  // roots of q
    int orbit_size = 0;
    bool reduced = true;        // false when q has a multiple root (degenerate stratum)
    double hp_error = 0.0;      // how well the reconstructed germ reproduces the target rhos
};

namespace detail {

inline double imaginary_mass(std::span<const cplx> k) {
    double s = 0.0;
    for (const cplx& z : k) s += std::abs(z.imag());
    return s;
}

/// Orbit member with the least total imaginary part; ties go to the canonical order.
inline std::vector<cplx> orbit_representative(const std::vector<std::vector<cplx>>& members) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const double mi = imaginary_mass(members[i]);
        const double mb = imaginary_mass(members[best]);
        const double tie = 1e-9 * (1.0 + max_modulus(members[best]));
        if (mi < mb - tie || (std::abs(mi - mb) <= tie && tuple_key(members[i]) < tuple_key(members[best])))
            best = i;
    }
    return members[best];
}

/// A representative germ of the type, used to evaluate HP invariants of reconstructed classes.
inline Weights representative_weights(GermType type) {
    return type == GermType::II ? Weights{1, 2} : Weights{2, 3};
}

}  // namespace detail

/// One class record per Z_n orbit, with the germ reconstructed through lambda_of_kappa and its
/// HP invariant checked against the fiber's target.
inline std::vector<ClassRecord> classes_from_fiber(const Fiber& fiber, cplx sigma_n = 1.0,
                                                   const RootFinderConfig& rcfg = {}) {
    std::vector<ClassRecord> out;
    const int n = fiber.target.n;
    for (const auto& orbit : fiber.orbits) {
        std::vector<std::vector<cplx>> members;
        for (int i : orbit) members.push_back(fiber.solutions[static_cast<std::size_t>(i)].kappa);
        ClassRecord rec;
        rec.kappa = detail::orbit_representative(members);
        rec.orbit_size = static_cast<int>(orbit.size());
        rec.q = lambda_of_kappa(rec.kappa, n, sigma_n);
        RootMultiset lam = roots(rec.q, rcfg);
        rec.reduced = lam.all_simple() && std::none_of(lam.roots.begin(), lam.roots.end(),
                                                       [](cplx z) { return z == cplx{0.0}; });
        rec.lambdas = lam.roots;
        if (rec.reduced) {
            const QHFunction germ(detail::representative_weights(fiber.target.germ_type), 0, 0, rec.lambdas,
                                  Tolerance{0.0, 1e-12});
            const HPInvariant inv = hp_invariant(germ, rcfg);
            double worst = 0.0;
            for (const cplx& t : fiber.target.targets) {
                double best = std::numeric_limits<double>::infinity();
                for (const cplx& r : inv.rhos) best = std::min(best, std::abs(r - t) / std::max(1.0, std::abs(t)));
                worst = std::max(worst, best);
            }
            rec.hp_error = worst;
        } else {
            rec.hp_error = std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

struct CountReport {
    int classes = 0;
    int solutions = 0;
    long bound = 0;
    bool within_bound = true;
    bool equality = false;
    bool degenerate = false;
    bool incomplete = false;
    std::vector<std::string> warnings;
};

inline long class_bound(GermType type, int n) {
    return detail::ipow(n, type == GermType::II ? n - 3 : n - 2);
}

inline CountReport count_classes(const Fiber& fiber) {
    CountReport out;
    out.classes = static_cast<int>(fiber.orbits.size());
    out.solutions = static_cast<int>(fiber.solutions.size());
    out.bound = class_bound(fiber.target.germ_type, fiber.target.n);
    out.within_bound = out.classes <= out.bound;
    out.equality = out.classes == out.bound;
    out.degenerate = fiber.degenerate;
    out.incomplete = fiber.incomplete();
    if (out.degenerate)
        out.warnings.push_back("degenerate fiber: the counting bound assumes a nondegenerate target");
    if (out.incomplete)
        out.warnings.push_back(std::to_string(fiber.failed) + " path(s) failed; retry with another seed");
    return out;
}

inline CountReport count_classes(const FiberTarget& target, const SolverConfig& cfg = {}) {
    return count_classes(solve_fiber(target, cfg));
}

/// Classes for an unordered list of all n - 1 critical values: every distinct ordering is
/// solved as an ordered target (type II additionally checks the auxiliary value), and classes
/// are deduplicated by analytic equivalence of their lambdas.
inline std::vector<ClassRecord> classes_for_unordered(GermType type, int n, std::vector<cplx> values,
                                                      const SolverConfig& cfg = {}) {
    if (static_cast<int>(values.size()) != n - 1)
        throw InputError("unordered mode expects all n - 1 critical values");
    std::vector<std::size_t> perm(values.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<std::vector<GridPoint>> seen;
    std::vector<ClassRecord> out;
    const Space space = type == GermType::II ? Space::Plane : Space::Punctured;
    do {
        std::vector<cplx> ordered;
        for (std::size_t i : perm) ordered.push_back(values[i]);
        const auto key = snap_all(ordered);
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        FiberTarget t{type, n, ordered};
        if (type == GermType::II) t.targets.pop_back();
        const Fiber fiber = solve_fiber(t, cfg);
        for (ClassRecord& rec : classes_from_fiber(fiber)) {
            if (!rec.reduced) continue;
            if (type == GermType::II) {
                const cplx aux = rec.q(rec.kappa.back());
                if (std::abs(aux - ordered.back()) > 1e-6 * std::max(1.0, std::abs(ordered.back()))) continue;
            }
            const Configuration c(space, rec.lambdas);
            const bool dup = std::any_of(out.begin(), out.end(), [&](const ClassRecord& o) {
                return equivalent(Configuration(space, o.lambdas), c, type).equivalent;
            });
            if (!dup) out.push_back(std::move(rec));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace qhm

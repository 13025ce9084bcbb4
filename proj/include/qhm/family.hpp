#pragma once

// Sampled one-parameter families f_t: whether the HP invariant stays constant along the samples
// and, when it does, whether all samples are analytically equivalent (a finite-sample check of
// the triviality of such families).

#include <string>
#include <vector>

#include "qhm/error.hpp"
#include "qhm/hp.hpp"
#include "qhm/moduli.hpp"
#include "qhm/qhfunc.hpp"

namespace qhm {

struct FamilySample {
    double t = 0.0;
    QHFunction germ;
};

struct FamilyReport {
    bool constant_invariant = false;
    bool single_class = false;                // all samples pairwise analytically equivalent
    std::vector<std::vector<int>> partition;  // samples grouped by hp class
    std::vector<std::string> keys;            // hp_canonical key per sample
    std::string verdict;
};

/// The germ moved to its normalized position: centered (type II) and with prod lambda = 1, so
/// that its HP invariant is read in the coordinates the scaling action refers to.
inline QHFunction normalized_germ(const QHFunction& f) {
    const QHFunction g = commode_reduce(f);
    Configuration c(Space::Plane, g.lambdas());
    if (g.germ_type() == GermType::II && g.n() > 1) c = center(c);
    if (std::abs(c.product()) == 0.0) return g;  // a centered point at 0 leaves no scaling to fix
    c = unit_product(c);
    return QHFunction(g.weights(), 0, 0, c.points(), Tolerance{0.0, 1e-12});
}

inline FamilyReport family_scan(const std::vector<FamilySample>& samples, double rtol = 1e-8) {
    if (samples.empty()) throw InputError("family: no samples");
    const QHFunction& first = samples.front().germ;
    if (first.germ_type() == GermType::I) throw UnsupportedTypeError("family: HP invariants need type II or III");
    for (const FamilySample& s : samples)
        if (!(s.germ.weights() == first.weights()) || s.germ.n() != first.n())
            throw IncomparableError("family: all samples must share (p, q, n)");

    std::vector<HPInvariant> invs;
    FamilyReport out;
    for (const FamilySample& s : samples) {
        invs.push_back(hp_invariant(normalized_germ(s.germ)));
        out.keys.push_back(hp_canonical(invs.back()).key);
    }
    for (std::size_t i = 0; i < invs.size(); ++i) {
        bool placed = false;
        for (auto& group : out.partition)
            if (hp_equal(invs[static_cast<std::size_t>(group.front())], invs[i], rtol)) {
                group.push_back(static_cast<int>(i));
                placed = true;
                break;
            }
        if (!placed) out.partition.push_back({static_cast<int>(i)});
    }
    out.constant_invariant = out.partition.size() == 1;
    if (!out.constant_invariant) {
        out.verdict = "invariant not constant: " + std::to_string(out.partition.size()) + " hp classes";
        return out;
    }
    out.single_class = true;
    for (std::size_t i = 1; i < samples.size() && out.single_class; ++i)
        out.single_class = equivalent(commode_reduce(samples[0].germ), commode_reduce(samples[i].germ), rtol).equivalent;
    out.verdict = out.single_class ? "trivial family: constant invariant, one analytic class"
                                   : "constant invariant but samples in several analytic classes";
    return out;
}

}  // namespace qhm

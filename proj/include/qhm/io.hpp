#pragma once

// JSON encodings. Complex scalars are [re, im]; multisets are emitted in canonical order.
// Parse errors name the offending field path, e.g. "germ.lambdas[2]".

#include "json.hpp"

#include <string>
#include <vector>

#include "qhm/complex.hpp"
#include "qhm/error.hpp"
#include "qhm/genericity.hpp"
#include "qhm/hp.hpp"
#include "qhm/moduli.hpp"
#include "qhm/poly.hpp"
#include "qhm/qhfunc.hpp"
#include "qhm/upsilon.hpp"

namespace qhm::io {

using json = nlohmann::json;

// -- writing ---------------------------------------------------------------------------------

/// -0.0 prints as "-0.0"; fold it so equal values serialize identically.
inline double clean(double x) { return x == 0.0 ? 0.0 : x; }

inline json to_json(cplx z) { return json::array({clean(z.real()), clean(z.imag())}); }

inline json to_json(std::span<const cplx> zs) {
    json a = json::array();
    for (const cplx& z : zs) a.push_back(to_json(z));
    return a;
}

inline json sorted_json(std::vector<cplx> zs) {
    canonical_sort(zs);
    return to_json(zs);
}

inline json to_json(const ComplexPoly& p) { return to_json(std::span<const cplx>(p.coeffs())); }

inline json to_json(const QHFunction& f) {
    return {{"p", f.weights().p}, {"q", f.weights().q}, {"m", f.m()}, {"k", f.k()}, {"lambdas", sorted_json(f.lambdas())}};
}

inline json to_json(const HPInvariant& inv) {
    const HPCanonical canon = hp_canonical(inv);
    return {{"type", to_string(inv.germ_type)},
            {"p", inv.weights.p},
            {"q", inv.weights.q},
            {"n", inv.n},
            {"rho0", inv.rho0 ? to_json(*inv.rho0) : json(nullptr)},
            {"rhos", sorted_json(inv.rhos)},
            {"zero_kappas", inv.zero_kappas},
            {"h_y_branch", inv.h_y_branch()},
            {"h_polar", inv.h_polar()},
            {"canonical_key", canon.key},
            {"degenerate", canon.degenerate}};
}

inline json to_json(const FiberTarget& t) {
    return {{"type", to_string(t.germ_type)}, {"n", t.n}, {"target", to_json(t.targets)}};
}

inline json to_json(const Fiber& f) {
    json sols = json::array();
    for (const FiberSolution& s : f.solutions)
        sols.push_back({{"kappa", to_json(s.kappa)},
                        {"residual", s.residual},
                        {"multiplicity", s.multiplicity},
                        {"singular", s.singular},
                        {"diverged", false}});
    return {{"target", to_json(f.target)},
            {"bezout", f.bezout},
            {"solutions", sols},
            {"finite_mass", f.finite_mass()},
            {"diverged_paths", f.diverged},
            {"failed_paths", f.failed},
            {"orbit_partition", f.orbits},
            {"degenerate", f.degenerate},
            {"degenerate_reasons", f.degenerate_reasons},
            {"incomplete", f.incomplete()}};
}

inline json to_json(const ClassRecord& c) {
    json hp_error = std::isfinite(c.hp_error) ? json(c.hp_error) : json(nullptr);
    return {{"kappa", to_json(c.kappa)},
            {"Q", to_json(c.q)},
            {"lambdas", sorted_json(c.lambdas)},
            {"orbit_size", c.orbit_size},
            {"reduced", c.reduced},
            {"hp_error", hp_error}};
}

inline json to_json(const CountReport& r) {
    return {{"classes", r.classes},     {"solutions", r.solutions},   {"bound", r.bound},
            {"within_bound", r.within_bound}, {"equality", r.equality}, {"degenerate", r.degenerate},
            {"incomplete", r.incomplete}, {"warnings", r.warnings}};
}

inline json to_json(const BifurcationReport& r) {
    json out = {{"generic", r.generic()},
                {"in_BL", r.in_BL},
                {"in_BG", r.in_BG},
                {"borderline", r.borderline},
                {"tolerance", r.tol},
                {"bl_resultant", r.bl_resultant}};
    out["bl_measure"] = std::isfinite(r.bl_measure) ? json(r.bl_measure) : json(nullptr);
    out["bg_measure"] = std::isfinite(r.bg_measure) ? json(r.bg_measure) : json(nullptr);
    out["bl_witness"] = r.bl_witness ? to_json(*r.bl_witness) : json(nullptr);
    out["bg_witness"] = r.bg_witness ? json::array({to_json(r.bg_witness->first), to_json(r.bg_witness->second)})
                                     : json(nullptr);
    return out;
}

inline json to_json(const Transformation& t) {
    switch (t.kind) {
        case Transformation::Kind::Affine: return {{"kind", "affine"}, {"a", to_json(t.a)}, {"b", to_json(t.b)}};
        case Transformation::Kind::Scaling: return {{"kind", "scaling"}, {"a", to_json(t.a)}};
        case Transformation::Kind::Mobius:
            return {{"kind", "mobius"}, {"a", to_json(t.a)}, {"b", to_json(t.b)}, {"c", to_json(t.c)}, {"d", to_json(t.d)}};
        case Transformation::Kind::RootOfUnity: return {{"kind", "root_of_unity"}, {"s", t.s}, {"n", t.n}};
    }
    return nullptr;
}

// -- reading ---------------------------------------------------------------------------------

inline const json& field(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw InputError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError((path.empty() ? key : path + "." + key) + ": missing field");
    return *it;
}

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline int read_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw InputError(path + ": expected an integer");
    return j.get<int>();
}

inline double read_double(const json& j, const std::string& path) {
    if (!j.is_number()) throw InputError(path + ": expected a number");
    return j.get<double>();
}

/// [re, im] or a bare real number.
inline cplx read_complex(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError(path + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> read_complex_list(const json& j, const std::string& path) {
    if (!j.is_array()) throw InputError(path + ": expected a list of [re, im]");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_complex(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline int optional_int(const json& j, const std::string& path, const std::string& key, int fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : read_int(*it, join(path, key));
}

inline GermType read_type(const json& j, const std::string& path) {
    if (!j.is_string()) throw InputError(path + ": expected \"I\", \"II\" or \"III\"");
    try {
        return germ_type_from_string(j.get<std::string>());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// {p, q, m?, k?, lambdas} or {p, q, m?, k?, Q} with Q the ascending coefficients of a monic
/// polynomial.
inline QHFunction read_germ(const json& j, const std::string& path = "germ") {
    if (!j.is_object()) throw InputError(path + ": expected an object");
    const int p = read_int(field(j, path, "p"), join(path, "p"));
    const int q = read_int(field(j, path, "q"), join(path, "q"));
    const int m = optional_int(j, path, "m", 0);
    const int k = optional_int(j, path, "k", 0);
    try {
        const Weights w(p, q);
        if (j.contains("lambdas")) {
            if (j.contains("Q")) throw InputError("give either lambdas or Q, not both");
            return QHFunction(w, m, k, read_complex_list(j["lambdas"], join(path, "lambdas")));
        }
        if (j.contains("Q")) {
            const QHFunction g = f_of_q(ComplexPoly(read_complex_list(j["Q"], join(path, "Q"))), w);
            return QHFunction(w, m, k, g.lambdas());
        }
        throw InputError("missing field (lambdas or Q)");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        if (msg.rfind(path, 0) == 0) throw;
        throw InputError(path + ": " + msg);
    }
}

inline FiberTarget read_target(const json& j, const std::string& path = "payload") {
    FiberTarget t;
    t.germ_type = read_type(field(j, path, "type"), join(path, "type"));
    t.n = read_int(field(j, path, "n"), join(path, "n"));
    t.targets = read_complex_list(field(j, path, "target"), join(path, "target"));
    return t;
}

}  // namespace qhm::io

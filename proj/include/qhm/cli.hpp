#pragma once

// Verb dispatch shared by the qhm executable and the tests. Every verb maps a JSON payload and a
// run configuration to one JSON document; the document embeds the run manifest.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "qhm/error.hpp"
#include "qhm/family.hpp"
#include "qhm/genericity.hpp"
#include "qhm/hp.hpp"
#include "qhm/io.hpp"
#include "qhm/moduli.hpp"
#include "qhm/qhfunc.hpp"
#include "qhm/upsilon.hpp"
#include "qhm/verify.hpp"

namespace qhm::cli {

using io::json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 2, kIncomplete = 3 };

struct RunConfig {
    std::uint64_t seed = 42;
    double tol = 1e-8;
    bool permute_targets = false;

    [[nodiscard]] SolverConfig solver() const {
        SolverConfig s;
        s.seed = seed;
        return s;
    }
};

struct Outcome {
    json document;
    int exit_code = kOk;
};

inline json manifest(const RunConfig& cfg) {
    return {{"seed", cfg.seed},
            {"config", {{"tol", cfg.tol}, {"permute_targets", cfg.permute_targets}}},
            {"version", kVersion}};
}

/// Overrides from a batch record's "config" object.
inline RunConfig merge_config(RunConfig base, const json& j, const std::string& path) {
    if (j.is_null()) return base;
    if (!j.is_object()) throw InputError(path + ": expected an object");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError(path + ".seed: expected a nonnegative integer");
        base.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tol")) base.tol = io::read_double(j["tol"], path + ".tol");
    if (j.contains("permute_targets")) {
        if (!j["permute_targets"].is_boolean()) throw InputError(path + ".permute_targets: expected a boolean");
        base.permute_targets = j["permute_targets"].get<bool>();
    }
    return base;
}

namespace detail {

inline json germ_classification(const QHFunction& f) {
    const Classification c = classify(f);
    return {{"germ", io::to_json(f)},
            {"type", to_string(c.type)},
            {"commode", c.commode},
            {"n", f.n()},
            {"weighted_degree", f.weighted_degree()},
            {"canonical_key", canonical_form(configuration_of(f), f.germ_type()).key}};
}

inline json classes_json(const std::vector<ClassRecord>& recs) {
    json a = json::array();
    for (const auto& r : recs) a.push_back(io::to_json(r));
    return a;
}

inline Outcome classes_verb(const json& payload, const RunConfig& cfg) {
    if (cfg.permute_targets) {
        const GermType type = io::read_type(io::field(payload, "payload", "type"), "payload.type");
        const int n = io::read_int(io::field(payload, "payload", "n"), "payload.n");
        const auto values = io::read_complex_list(io::field(payload, "payload", "target"), "payload.target");
        if (type == GermType::I) throw UnsupportedTypeError("payload.type: classes need type II or III");
        if (n < 2 || n > 6) throw InputError("payload.n: unordered mode supports 2 <= n <= 6");
        const auto recs = classes_for_unordered(type, n, values, cfg.solver());
        return {{{"mode", "unordered"}, {"classes", classes_json(recs)}, {"count", recs.size()}}, kOk};
    }
    const FiberTarget t = io::read_target(payload);
    const Fiber f = solve_fiber(t, cfg.solver());
    const auto recs = classes_from_fiber(f);
    json doc = {{"mode", "ordered"},
                {"target", io::to_json(t)},
                {"classes", classes_json(recs)},
                {"count", recs.size()},
                {"degenerate", f.degenerate},
                {"incomplete", f.incomplete()}};
    return {doc, f.incomplete() ? kIncomplete : kOk};
}

inline Outcome family_verb(const json& payload, const RunConfig& cfg) {
    const json& samples = io::field(payload, "payload", "samples");
    if (!samples.is_array()) throw InputError("payload.samples: expected a list");
    std::vector<FamilySample> list;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string path = "payload.samples[" + std::to_string(i) + "]";
        const double t = samples[i].contains("t") ? io::read_double(samples[i]["t"], path + ".t") : static_cast<double>(i);
        list.push_back({t, io::read_germ(io::field(samples[i], path, "germ"), path + ".germ")});
    }
    const FamilyReport r = family_scan(list, cfg.tol);
    return {{{"constant_invariant", r.constant_invariant},
             {"single_class", r.single_class},
             {"partition", r.partition},
             {"keys", r.keys},
             {"verdict", r.verdict}},
            kOk};
}

inline json verify_json(const VerifyReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"measured_error", c.measured_error}, {"tolerance", c.tolerance}});
    json sols = json::array();
    for (const auto& k : r.fiber_solutions) sols.push_back(io::to_json(k));
    return {{"all_passed", r.all_passed()}, {"checks", checks}, {"fiber_solutions", sols}};
}

inline Outcome dispatch(const std::string& verb, const json& payload, const RunConfig& cfg) {
    if (verb == "classify") return {germ_classification(io::read_germ(payload, "payload")), kOk};
    if (verb == "invariant") {
        const QHFunction f = io::read_germ(payload, "payload");
        return {{{"invariant", io::to_json(hp_invariant(f))}}, kOk};
    }
    if (verb == "fiber") {
        const Fiber f = solve_fiber(io::read_target(payload), cfg.solver());
        return {{{"fiber", io::to_json(f)}}, f.incomplete() ? kIncomplete : kOk};
    }
    if (verb == "classes") return classes_verb(payload, cfg);
    if (verb == "count") {
        const Fiber f = solve_fiber(io::read_target(payload), cfg.solver());
        return {{{"count", io::to_json(count_classes(f))}}, f.incomplete() ? kIncomplete : kOk};
    }
    if (verb == "equiv") {
        const QHFunction a = io::read_germ(io::field(payload, "payload", "a"), "payload.a");
        const QHFunction b = io::read_germ(io::field(payload, "payload", "b"), "payload.b");
        const EquivalenceResult r = equivalent(a, b, cfg.tol);
        return {{{"equivalent", r.equivalent}, {"witness", r.witness ? io::to_json(*r.witness) : json(nullptr)}}, kOk};
    }
    if (verb == "generic") {
        BifurcationConfig bc;
        bc.tol = cfg.tol;
        if (payload.is_object() && payload.contains("p")) {
            return {{{"report", io::to_json(is_generic(io::read_germ(payload, "payload"), bc))}}, kOk};
        }
        const ComplexPoly q(io::read_complex_list(io::field(payload, "payload", "Q"), "payload.Q"));
        BifurcationReport r = in_local_bifurcation(q, bc);
        const BifurcationReport g = in_semilocal_bifurcation(q, bc);
        r.in_BG = g.in_BG;
        r.bg_measure = g.bg_measure;
        r.bg_witness = g.bg_witness;
        r.borderline = r.borderline || g.borderline;
        return {{{"report", io::to_json(r)}}, kOk};
    }
    if (verb == "family") return family_verb(payload, cfg);
    if (verb == "verify-paper") {
        const VerifyReport r = verify_reference_suite(cfg.solver());
        return {{{"report", verify_json(r)}}, kOk};
    }
    throw InputError("unknown verb '" + verb +
                     "' (expected classify, invariant, fiber, classes, count, equiv, generic, family, verify-paper, batch)");
}

}  // namespace detail

/// Runs one verb. Input and incompleteness errors become documents with the matching exit code.
inline Outcome run(const std::string& verb, const json& payload, const RunConfig& cfg) {
    Outcome out;
    try {
        out = detail::dispatch(verb, payload, cfg);
    } catch (const IncompleteSolveError& e) {
        out = {{{"error", e.what()}}, kIncomplete};
    } catch (const InputError& e) {
        out = {{{"error", e.what()}}, kInputError};
    } catch (const json::exception& e) {
        out = {{{"error", std::string("payload: ") + e.what()}}, kInputError};
    }
    out.document["verb"] = verb;
    out.document["manifest"] = manifest(cfg);
    return out;
}

/// Newline-delimited job records {verb, payload, config?}; one result line per job.
/// Returns the largest exit code seen.
inline int run_batch(std::istream& in, std::ostream& out, const RunConfig& cfg) {
    int worst = kOk;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string path = "line " + std::to_string(lineno);
        Outcome o;
        std::string verb = "?";
        try {
            const json rec = json::parse(line);
            const json& v = io::field(rec, path, "verb");
            if (!v.is_string()) throw InputError(path + ".verb: expected a string");
            verb = v.get<std::string>();
            if (verb == "batch") throw InputError(path + ".verb: batch jobs cannot nest");
            const RunConfig local = merge_config(cfg, rec.value("config", json(nullptr)), path + ".config");
            o = run(verb, rec.value("payload", json::object()), local);
        } catch (const InputError& e) {
            o = {{{"error", e.what()}, {"verb", verb}, {"manifest", manifest(cfg)}}, kInputError};
        } catch (const json::exception& e) {
            o = {{{"error", path + ": " + e.what()}, {"verb", verb}, {"manifest", manifest(cfg)}}, kInputError};
        }
        o.document["exit_code"] = o.exit_code;
        out << o.document.dump() << '\n';
        worst = std::max(worst, o.exit_code);
    }
    return worst;
}

}  // namespace qhm::cli

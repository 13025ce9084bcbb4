// qhm: command-line front end. Payloads are JSON read from a file argument or stdin.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qhm/cli.hpp"

namespace {

std::string slurp(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw qhm::InputError("cannot read payload file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariants and moduli enumeration for quasi-homogeneous plane curve germs"};
    app.set_version_flag("--version", qhm::cli::kVersion);

    qhm::cli::RunConfig cfg;
    if (const char* env = std::getenv("QHM_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "QHM_SEED must be a nonnegative integer\n";
            return qhm::cli::kInputError;
        }
    }
    std::string verb;
    std::string input;
    std::string out_path;
    app.add_option("verb", verb, "classify | invariant | fiber | classes | count | equiv | generic | family | verify-paper | batch")
        ->required();
    app.add_option("input", input, "payload JSON file (batch: JSONL file); stdin when omitted or '-'");
    app.add_option("--seed", cfg.seed, "solver seed (default 42, or QHM_SEED)");
    app.add_option("--tol", cfg.tol, "comparison tolerance (default 1e-8)")->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "write the document to this path (batch: append)");
    app.add_flag("--permute-targets", cfg.permute_targets, "classes: treat the target as an unordered list of all n - 1 values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qhm::cli::kInputError;
    }

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, verb == "batch" ? std::ios::app : std::ios::trunc);
        if (!file) {
            std::cerr << "cannot open output file '" << out_path << "'\n";
            return qhm::cli::kInputError;
        }
    }
    std::ostream& out = out_path.empty() ? std::cout : file;

    if (verb == "batch") {
        std::ifstream in;
        if (!input.empty() && input != "-") {
            in.open(input);
            if (!in) {
                std::cerr << "cannot read batch file '" << input << "'\n";
                return qhm::cli::kInputError;
            }
        }
        return qhm::cli::run_batch(in.is_open() ? in : std::cin, out, cfg);
    }

    qhm::cli::json payload = qhm::cli::json::object();
    if (verb != "verify-paper") {
        try {
            payload = qhm::cli::json::parse(slurp(input));
        } catch (const std::exception& e) {
            qhm::cli::json err = {{"error", std::string("payload: ") + e.what()}, {"verb", verb},
                                  {"manifest", qhm::cli::manifest(cfg)}};
            out << err.dump(2) << '\n';
            return qhm::cli::kInputError;
        }
    }
    const qhm::cli::Outcome o = qhm::cli::run(verb, payload, cfg);
    out << o.document.dump(2) << '\n';
    if (o.exit_code == qhm::cli::kInputError && o.document.contains("error"))
        std::cerr << "error: " << o.document["error"].get<std::string>() << '\n';
    return o.exit_code;
}

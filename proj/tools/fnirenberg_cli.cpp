// Command-line front end: `fnirenberg certify ...` and `fnirenberg flow ...`.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fnirenberg/driver.hpp"
#include "fnirenberg/error.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fnir;

int fail(int code, const std::string& msg) {
    std::cerr << "fnirenberg: " << msg << "\n";
    return code;
}

int error_code(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Io: return exit_code::kIo;
        case ErrorKind::Usage: return exit_code::kUsage;
        default: return exit_code::kDataError;
    }
}

void emit(const json& report, const std::optional<std::string>& out) {
    const std::string text = report.dump(2) + "\n";
    if (!out) {
        std::cout << text;
        return;
    }
    std::ofstream f(*out);
    if (!f) throw Error(ErrorKind::Io, "cannot write " + *out);
    f << text;
    if (!f) throw Error(ErrorKind::Io, "failed while writing " + *out);
}

void summarize_certificate(const json& r) {
    const json& c = r["certificate"];
    std::cerr << "theorem " << c["theorem"].get<std::string>() << ": A = " << c["A"] << ", B = " << c["B"]
              << ", S = " << c["S"] << " -> " << r["verdict"].get<std::string>() << "\n";
    for (const auto& w : c["caveats"]) std::cerr << "caveat: " << w.get<std::string>() << "\n";
    for (const auto& w : r["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Existence certificates and reduced flows for the fractional Nirenberg problem", "fnirenberg"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::string problem_path, initial_path;
    std::optional<std::string> out_path, log_path, k_expr, mode;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_p;
    std::optional<double> t_max, lambda_cap;
    bool force = false, ordered = false;

    auto* cert = app.add_subcommand("certify", "Evaluate the existence criterion for a problem file");
    cert->add_option("--problem", problem_path, "Problem JSON file")->required();
    cert->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    cert->add_option("--seed", seed, "Multistart seed (default 42)");
    cert->add_option("--max-p", max_p, "Largest tuple size to enumerate (0 = all)");
    cert->add_flag("--force", force, "Allow censuses above 2^20 records");
    cert->add_flag("--ordered-tuples", ordered, "Also report the ordered-tuple count");
    cert->add_option("--c1tilde-mode", mode, "paper-header or proof-step")
        ->check(CLI::IsMember({"paper-header", "proof-step"}));
    cert->add_option("--k-expr", k_expr, "Curvature expression, replacing the problem's K source");

    auto* flow = app.add_subcommand("flow", "Integrate the reduced bubble dynamics");
    flow->add_option("--problem", problem_path, "Problem JSON file")->required();
    flow->add_option("--initial", initial_path, "Initial bubbles JSON file")->required();
    flow->add_option("--out", out_path, "Write the JSON report here instead of stdout");
    flow->add_option("--t-max", t_max, "Time horizon");
    flow->add_option("--lambda-cap", lambda_cap, "Blow-up threshold");
    flow->add_option("--log", log_path, "CSV trajectory log");
    flow->add_option("--k-expr", k_expr, "Curvature expression, replacing the problem's K source");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::kUsage;
    }

    try {
        if (!fs::is_regular_file(problem_path)) return fail(exit_code::kUsage, "no such problem file: " + problem_path);
        ProblemSpec spec = load_problem(problem_path);
        if (k_expr) {
            spec.K_expr = *k_expr;
            spec.points.clear();
        }

        if (cert->parsed()) {
            if (seed) spec.seed = *seed;
            if (max_p) spec.max_p = *max_p;
            if (mode) spec.mode = parse_mode(*mode);
            spec.force = spec.force || force;
            spec.ordered_tuples = spec.ordered_tuples || ordered;
            const CertifyResult r = certify(spec);
            summarize_certificate(r.report);
            emit(r.report, out_path);
            return r.exit_code;
        }

        if (!fs::is_regular_file(initial_path)) return fail(exit_code::kUsage, "no such initial file: " + initial_path);
        const InitialSpec init = load_initial(initial_path, spec.n);
        FlowRunOptions opts;
        opts.t_max = t_max;
        opts.lambda_cap = lambda_cap;
        if (log_path) opts.log = *log_path;
        const FlowRunResult r = flow_cmd(spec, init, opts);
        std::cerr << "flow: " << r.report["outcome"].get<std::string>() << " (" << r.report["reason"].get<std::string>()
                  << ") after " << r.report["steps"] << " steps\n";
        emit(r.report, out_path);
        return r.exit_code;
    } catch (const Error& e) {
        return fail(error_code(e), e.what());
    } catch (const std::exception& e) {
        return fail(exit_code::kDataError, e.what());
    }
}

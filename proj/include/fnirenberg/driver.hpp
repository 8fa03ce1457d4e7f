#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fnirenberg/census.hpp"
#include "fnirenberg/constants.hpp"
#include "fnirenberg/critpoints.hpp"
#include "fnirenberg/expr.hpp"
#include "fnirenberg/flow.hpp"

namespace fnir {

using json = nlohmann::json;

inline constexpr std::string_view kToolName = "fnirenberg";
inline constexpr std::string_view kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int kCertified = 0;
inline constexpr int kInconclusive = 10;
inline constexpr int kNotApplicable = 20;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;
inline constexpr int kIo = 74;
}  // namespace exit_code

struct Tolerances {
    double grad_tol = 1e-7;
    double beta_tol = 1e-3;
    double beta_consistency_tol = 0.05;
    double degeneracy_rel_tol = 1e-9;
    double bsum_tol = 1e-9;
};

/// Explicit critical-point data as given in a problem file.
struct PointSpec {
    Vector y;
    std::optional<std::vector<Vector>> frame;
    double K = 0.0;
    double beta = 0.0;
    Vector b;
};

struct ProblemSpec {
    int n = 0;
    double sigma = 0.0;
    std::optional<std::string> K_expr;
    std::vector<PointSpec> points;  // used when K_expr is empty
    Tolerances tol;
    double c0 = 1.0;
    C1TildeMode mode = C1TildeMode::ProofStep;
    std::size_t max_p = 0;
    bool ordered_tuples = false;
    bool force = false;
    std::uint64_t seed = 42;
    std::size_t n_starts = 500;
    json flow;  // optional FlowConfig overrides
};

/// Parses a problem document. Throws InvalidInput with the offending key.
ProblemSpec parse_problem(const json& doc);
/// Reads and parses a problem file; Io when unreadable, InvalidInput when malformed.
ProblemSpec load_problem(const std::filesystem::path& path);
json problem_to_json(const ProblemSpec& spec);

/// FNV-1a 64-bit digest of the canonical dump of `report` without its "hash" key.
std::string report_hash(const json& report);

struct PointTable {
    std::vector<ClassifiedPoint> points;
    std::vector<std::string> warnings;
    std::vector<std::string> caveats;
};

/// Detection, fitting, validation and classification of the critical points.
PointTable build_point_table(const ProblemSpec& spec);

struct CertifyResult {
    json report;
    Certificate certificate;
    int exit_code = exit_code::kNotApplicable;
};

/// Full pipeline: points, constants, A1, census, certificate. Module errors
/// are rethrown with the stage name prefixed.
CertifyResult certify(const ProblemSpec& spec);

FlowConfig parse_flow_config(const json& doc, FlowConfig base = {});
json flow_config_to_json(const FlowConfig& config);

/// Initial bubbles: {"bubbles": [{"a": [...], "lambda": x}, ...], "flow": {...}}.
struct InitialSpec {
    std::vector<SpherePoint> points;
    std::vector<double> lambdas;
    json flow;
};

InitialSpec parse_initial(const json& doc, int n);
InitialSpec load_initial(const std::filesystem::path& path, int n);

struct FlowRunOptions {
    std::optional<double> t_max;
    std::optional<double> lambda_cap;
    std::optional<std::filesystem::path> log;
};

struct FlowRunResult {
    json report;
    FlowOutcome outcome;
    int exit_code = 0;
};

FlowModel build_flow_model(const ProblemSpec& spec);

FlowRunResult flow_cmd(const ProblemSpec& spec, const InitialSpec& initial, const FlowRunOptions& opts = {});

/// CSV trajectory: time, per-bubble lambda and ambient coordinates, zone tags, region label, pairing.
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectorySample>& trajectory);

}  // namespace fnir

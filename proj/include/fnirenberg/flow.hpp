#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fnirenberg/constants.hpp"
#include "fnirenberg/critpoints.hpp"
#include "fnirenberg/expr.hpp"
#include "fnirenberg/geometry.hpp"

namespace fnir {

// Reduced dynamics of p bubbles (alpha_i, a_i, lambda_i). Only the leading
// terms of the gradient expansions are integrated: J(u) prefactors are set to
// 1, o(.)/O(.) remainders and the v-bar correction are dropped.

struct FlowConfig {
    double epsilon = 0.01;     // V(p, eps): lambda > 1/eps, eps_ij < eps
    double M1 = 10.0;          // L1 / L2 threshold on lambda |a - y|
    double delta = 0.1;        // inner zone: lambda |a - y| < delta
    double rho_ball = 0.2;     // radius of the critical-point balls
    double lambda_cap = 1e8;   // blow-up detection
    double dt_init = 1.0;
    double dt_min = 1e-14;
    double t_max = 1e20;
    std::size_t max_steps = 200000;
    double rel_tol = 1e-4;     // local error tolerance of the adaptive step
    double hysteresis = 0.1;   // relative width of the region switching band
    double alpha_min = 0.1;
    double alpha_max = 10.0;
    double pp_fraction = 0.9;  // c = pp_fraction (n - 2 sigma)/2 in the eps_ij derivative bound

    void validate() const;
};

/// Critical-point data and constants driving the flow. When `K` is absent the
/// curvature near each critical point is the flat model K(y) + sum b_k |w_k|^beta.
struct FlowModel {
    int n = 0;
    double sigma = 0.0;
    Constants consts;
    std::vector<ClassifiedPoint> points;
    std::optional<Expression> K;
    double fd_step = 1e-5;

    double K_at(const SpherePoint& a) const;
    /// Ambient tangent gradient of K at a.
    Vector grad_K(const SpherePoint& a) const;
    /// Index of the nearest critical point and its geodesic distance.
    std::pair<std::size_t, double> nearest(const SpherePoint& a) const;
    double max_beta() const;
    /// alpha_i slaved to the V(p, eps) constraint with J = 1: alpha = K(a)^{-(n-2s)/2}.
    double slaved_alpha(const SpherePoint& a) const;
};

enum class Zone { Inner, Ball, Outside };

std::string_view zone_name(Zone z);

struct BubbleTag {
    std::optional<std::size_t> anchor;  // nearest critical point inside rho_ball
    Zone zone = Zone::Outside;
    bool L2 = false;                    // lambda |a - y| > M1
    double scaled_offset = 0.0;         // lambda |a - y| (0 when outside)
};

struct ReducedState {
    std::vector<double> alphas;
    std::vector<SpherePoint> points;
    std::vector<double> lambdas;
    double time = 0.0;
    std::vector<BubbleTag> tags;  // empty until the first classification

    std::size_t p() const { return lambdas.size(); }
};

struct PairInteraction {
    double eps = 0.0;
    double d_eps_d_lambda_i = 0.0;
    Vector d_eps_d_a_i;  // in normal_frame(a_i, 0) coordinates
};

/// eps_ij = T^{(2s-n)/2}, T = l_i/l_j + l_j/l_i + l_i l_j |a_i - a_j|^2 (chordal distance).
PairInteraction pairwise_interaction(const ReducedState& state, std::size_t i, std::size_t j, int n, double sigma);

/// Int_{R^n} sign(x_k + s) |x_k + s|^{beta-1} x_k (1+|x|^2)^{-n} dx.
double dilation_moment(int n, double beta, double s);
/// Int_{R^n} |x_k + s|^beta x_k (1+|x|^2)^{-(n+1)} dx.
double translation_moment(int n, double beta, double s);

struct LambdaPairing {
    double self_term = 0.0;         // flatness contribution inside the bracket
    double interaction_term = 0.0;  // -c2 sum_j alpha_j lambda_i d eps_ij / d lambda_i
    double total = 0.0;             // 2 (self + interaction)
};

/// Leading term of <dJ, lambda_i d delta_i / d lambda_i> with J = 1.
LambdaPairing lambda_velocity(const ReducedState& state, std::size_t i, const FlowModel& model,
                              const FlowConfig& config);

/// Leading term of <dJ, (1/lambda_i) d delta_i / d a_i> with J = 1, in the chart
/// of the bubble (the anchor's flatness frame inside a ball, normal_frame(a_i, 0) outside).
Vector point_velocity(const ReducedState& state, std::size_t i, const FlowModel& model, const FlowConfig& config);

/// Chart in which bubble i moves.
TangentFrame bubble_chart(const ReducedState& state, std::size_t i, const FlowModel& model);

struct RegionInfo {
    std::vector<BubbleTag> tags;
    std::string label;
};

/// Per-bubble tags (with hysteresis against `state.tags` when present) and a global label:
/// V1 / V1^1 (all near K minus the critical stratum / and all in K+ distinct),
/// V2 / V2^1 (all near the critical stratum / K+ with positive rho), V1xV2, shared-point, outside.
RegionInfo classify_region(const ReducedState& state, const FlowModel& model, const FlowConfig& config);

struct StepDiagnostics {
    double dt = 0.0;
    double pairing = 0.0;           // <dJ, W> at the start of the step
    double pairing_after = 0.0;     // <dJ(new state), W>
    double bound = 0.0;             // sum lambda^{-beta} + sum |grad K|/lambda + sum eps_ij
    double normalized_pairing = 0.0;
    std::size_t rejected = 0;
    std::size_t pp_checks = 0;
    std::size_t pp_violations = 0;
    double vbar_estimate = 0.0;
};

/// One adaptive Heun step in (log lambda, chart) coordinates. The step is halved
/// until the local error is within tolerance and the pairing is non-positive both
/// at the start and at the end of the step.
ReducedState step(const ReducedState& state, const FlowModel& model, const FlowConfig& config, double& dt,
                  StepDiagnostics* diag = nullptr);

enum class FlowOutcomeKind { BlowUp, Exit, Timeout };

std::string_view outcome_name(FlowOutcomeKind k);

struct TrajectorySample {
    double time = 0.0;
    std::vector<double> lambdas;
    std::vector<SpherePoint> points;
    std::vector<BubbleTag> tags;
    std::string region;
    double pairing = 0.0;
};

struct FlowOutcome {
    FlowOutcomeKind kind = FlowOutcomeKind::Timeout;
    std::string reason;
    ReducedState final_state;
    std::vector<std::optional<std::size_t>> limit_tuple;  // anchors at termination
    std::vector<double> limit_weights;                    // K(y)^{-(n-2s)/2}
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t pairing_violations = 0;  // accepted steps with pairing > 0
    double max_pairing = -1e300;
    std::size_t pp_checks = 0;
    std::size_t pp_violations = 0;
    double theorem_bound_c = 0.0;  // min over steps of -normalized pairing / bound
    double vbar_estimate_max = 0.0;
    std::vector<TrajectorySample> trajectory;
};

/// Throws InvalidInput if the state violates the V(p, eps) invariants.
void validate_state(const ReducedState& state, const FlowModel& model, const FlowConfig& config);

/// Builds a state at the given centres and concentrations with slaved alphas.
ReducedState make_state(std::vector<SpherePoint> points, std::vector<double> lambdas, const FlowModel& model);

/// v-bar size estimate from its computable pieces (lambda powers, eps_kr terms), unit constant.
double vbar_estimate(const ReducedState& state, const FlowModel& model);

FlowOutcome run_to_infinity(const ReducedState& initial, const FlowModel& model, const FlowConfig& config,
                            bool record_trajectory = false);

}  // namespace fnir

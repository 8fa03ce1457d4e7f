#include "fnirenberg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "fnirenberg/error.hpp"
#include "fnirenberg/interaction.hpp"
#include "fnirenberg/quadrature.hpp"

namespace fnir {

namespace {

constexpr QuadOptions kMomentQuad{1e-13, 1e-10, 2000};

double signed_power(double u, double e) { return u < 0 ? -std::pow(-u, e) : std::pow(u, e); }

// Integral over [0, inf) split at the kink t = |s|.
double half_line(const std::function<double(double)>& f, double s, const char* what) {
    const double kink = std::abs(s);
    QuadResult total;
    if (kink > 0) {
        const QuadResult head = integrate(f, 0.0, kink, kMomentQuad);
        total.value += head.value;
        total.error += head.error;
        total.converged = head.converged;
        const QuadResult tail = integrate_to_infinity(f, kink, kMomentQuad);
        total.value += tail.value;
        total.error += tail.error;
        total.converged = total.converged && tail.converged;
    } else {
        total = integrate_to_infinity(f, 0.0, kMomentQuad);
    }
    if (!total.converged || !std::isfinite(total.value))
        throw Error(ErrorKind::IntegralFailure, std::string(what) + " moment at s = " + std::to_string(s) +
                                                    " did not converge (error estimate " +
                                                    std::to_string(total.error) + ")");
    return total.value;
}

double sum_b_scaled(const ClassifiedPoint& cp) { return cp.point.b_sum(); }

double alpha_power(double alpha, int n, double sigma) {
    return std::pow(alpha, (n + 2.0 * sigma) / (n - 2.0 * sigma));
}

double threshold_with_band(double base, bool currently_inside, double band) {
    // Entering needs to cross the lower edge of the band, leaving the upper edge.
    return currently_inside ? base * (1.0 + 0.5 * band) : base * (1.0 - 0.5 * band);
}

}  // namespace

void FlowConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw Error(ErrorKind::InvalidInput, std::string("flow config: ") + name + " must be positive");
    };
    positive(epsilon, "epsilon");
    positive(M1, "M1");
    positive(delta, "delta");
    positive(rho_ball, "rho_ball");
    positive(lambda_cap, "lambda_cap");
    positive(dt_init, "dt_init");
    positive(dt_min, "dt_min");
    positive(t_max, "t_max");
    positive(rel_tol, "rel_tol");
    positive(alpha_min, "alpha_min");
    positive(alpha_max, "alpha_max");
    if (hysteresis < 0.0 || hysteresis >= 1.0) throw Error(ErrorKind::InvalidInput, "flow config: hysteresis in [0, 1)");
    if (epsilon >= 1.0) throw Error(ErrorKind::InvalidInput, "flow config: epsilon must be < 1");
    if (dt_min >= dt_init) throw Error(ErrorKind::InvalidInput, "flow config: dt_min must be < dt_init");
    if (alpha_min >= alpha_max) throw Error(ErrorKind::InvalidInput, "flow config: alpha_min must be < alpha_max");
    if (lambda_cap <= 1.0 / epsilon)
        throw Error(ErrorKind::InvalidInput, "flow config: lambda_cap must exceed 1/epsilon");
    if (max_steps == 0) throw Error(ErrorKind::InvalidInput, "flow config: max_steps must be positive");
}

double FlowModel::K_at(const SpherePoint& a) const {
    if (K) return eval_on_sphere(*K, a);
    if (points.empty()) throw Error(ErrorKind::InvalidInput, "flow model has neither K nor critical points");
    const auto [idx, dist] = nearest(a);
    (void)dist;
    const CriticalPoint& cp = points[idx].point;
    const Vector w = log_map(cp.frame, a);
    double value = cp.K_val;
    for (Eigen::Index k = 0; k < w.size(); ++k) value += cp.b[k] * std::pow(std::abs(w[k]), cp.beta);
    return value;
}

Vector FlowModel::grad_K(const SpherePoint& a) const {
    if (K) {
        const TangentFrame frame = normal_frame(a, 0);
        return frame.axes * sphere_gradient(*K, frame, fd_step);
    }
    const auto [idx, dist] = nearest(a);
    (void)dist;
    const CriticalPoint& cp = points[idx].point;
    const Vector w = log_map(cp.frame, a);
    Vector g(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) g[k] = cp.beta * cp.b[k] * signed_power(w[k], cp.beta - 1.0);
    return project_tangent(a, cp.frame.axes * g);
}

std::pair<std::size_t, double> FlowModel::nearest(const SpherePoint& a) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = geodesic_distance(a, points[i].point.y);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d};
}

double FlowModel::max_beta() const {
    double b = 0.0;
    for (const ClassifiedPoint& cp : points) b = std::max(b, cp.point.beta);
    return b;
}

double FlowModel::slaved_alpha(const SpherePoint& a) const {
    const double k = K_at(a);
    if (!(k > 0.0)) throw Error(ErrorKind::KNotPositive, "K(a) = " + std::to_string(k) + " is not positive");
    return std::pow(k, -(n - 2.0 * sigma) / 2.0);
}

std::string_view zone_name(Zone z) {
    switch (z) {
        case Zone::Inner: return "inner";
        case Zone::Ball: return "ball";
        case Zone::Outside: return "outside";
    }
    return "?";
}

std::string_view outcome_name(FlowOutcomeKind k) {
    switch (k) {
        case FlowOutcomeKind::BlowUp: return "BlowUp";
        case FlowOutcomeKind::Exit: return "Exit";
        case FlowOutcomeKind::Timeout: return "Timeout";
    }
    return "?";
}

PairInteraction pairwise_interaction(const ReducedState& state, std::size_t i, std::size_t j, int n, double sigma) {
    if (i == j) throw Error(ErrorKind::InvalidInput, "pairwise_interaction needs i != j");
    const double li = state.lambdas[i], lj = state.lambdas[j];
    const Vector diff = state.points[i].coords() - state.points[j].coords();
    const double d2 = diff.squaredNorm();
    const double T = li / lj + lj / li + li * lj * d2;
    const double e = (2.0 * sigma - n) / 2.0;

    PairInteraction out;
    out.eps = std::pow(T, e);
    const double dT_dl = 1.0 / lj - lj / (li * li) + lj * d2;
    const double deps_dT = e * out.eps / T;
    out.d_eps_d_lambda_i = deps_dT * dT_dl;
    // d|a_i - a_j|^2 along a tangent direction v at a_i is 2 <v, a_i - a_j>.
    const TangentFrame frame = normal_frame(state.points[i], 0);
    out.d_eps_d_a_i = deps_dT * li * lj * 2.0 * (frame.axes.transpose() * diff);
    return out;
}

double dilation_moment(int n, double beta, double s) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "dilation moment needs n >= 2");
    if (!(beta > 1.0 && beta < n)) throw Error(ErrorKind::DivergentIntegral, "dilation moment needs 1 < beta < n");
    const double w_exp = -(n + 1.0) / 2.0;
    auto f = [&](double t) {
        const double phi = signed_power(s + t, beta - 1.0) - signed_power(s - t, beta - 1.0);
        return t * std::pow(1.0 + t * t, w_exp) * phi;
    };
    return radial_integral(n - 1, n) * half_line(f, s, "dilation");
}

double translation_moment(int n, double beta, double s) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "translation moment needs n >= 2");
    if (!(beta > 1.0 && beta < n)) throw Error(ErrorKind::DivergentIntegral, "translation moment needs 1 < beta < n");
    if (s == 0.0) return 0.0;
    const double w_exp = -(n + 3.0) / 2.0;
    auto f = [&](double t) {
        const double psi = std::pow(std::abs(s + t), beta) - std::pow(std::abs(s - t), beta);
        return t * std::pow(1.0 + t * t, w_exp) * psi;
    };
    return radial_integral(n - 1, n + 1.0) * half_line(f, s, "translation");
}

TangentFrame bubble_chart(const ReducedState& state, std::size_t i, const FlowModel& model) {
    if (i < state.tags.size() && state.tags[i].anchor) return model.points[*state.tags[i].anchor].point.frame;
    return normal_frame(state.points[i], 0);
}

LambdaPairing lambda_velocity(const ReducedState& state, std::size_t i, const FlowModel& model,
                              const FlowConfig& config) {
    (void)config;
    const int n = model.n;
    const double sigma = model.sigma;
    const double ns = n - 2.0 * sigma;
    const double lambda = state.lambdas[i];
    const double alpha = state.alphas[i];
    LambdaPairing out;

    if (i < state.tags.size() && state.tags[i].anchor) {
        const ClassifiedPoint& cp = model.points[*state.tags[i].anchor];
        const double beta = cp.point.beta;
        const double Ka = model.K_at(state.points[i]);
        const double lead = ns / (2.0 * n) * beta * alpha / Ka * std::pow(lambda, -beta);
        if (state.tags[i].zone == Zone::Inner) {
            out.self_term = lead * model.consts.c3(beta) * sum_b_scaled(cp);
        } else {
            const Vector w = log_map(cp.point.frame, state.points[i]);
            double acc = 0.0;
            for (Eigen::Index k = 0; k < w.size(); ++k)
                acc += cp.point.b[k] * dilation_moment(n, beta, lambda * w[k]);
            out.self_term = lead * model.consts.c0_power() * acc;
        }
    }

    double inter = 0.0;
    for (std::size_t j = 0; j < state.p(); ++j) {
        if (j == i) continue;
        const PairInteraction pi = pairwise_interaction(state, i, j, n, sigma);
        inter += state.alphas[j] * lambda * pi.d_eps_d_lambda_i;
    }
    out.interaction_term = -model.consts.c2 * inter;
    out.total = 2.0 * (out.self_term + out.interaction_term);
    return out;
}

Vector point_velocity(const ReducedState& state, std::size_t i, const FlowModel& model, const FlowConfig& config) {
    (void)config;
    const int n = model.n;
    const double sigma = model.sigma;
    const double lambda = state.lambdas[i];
    const double ap = alpha_power(state.alphas[i], n, sigma);

    if (i < state.tags.size() && state.tags[i].anchor) {
        const ClassifiedPoint& cp = model.points[*state.tags[i].anchor];
        const double beta = cp.point.beta;
        const Vector w = log_map(cp.point.frame, state.points[i]);
        const double scale = -2.0 * (n - 2.0 * sigma) * model.consts.c0_power() * ap * std::pow(lambda, -beta);
        Vector g(n);
        for (int k = 0; k < n; ++k) g[k] = scale * cp.point.b[k] * translation_moment(n, beta, lambda * w[k]);
        return g;
    }
    const TangentFrame frame = bubble_chart(state, i, model);
    return -model.consts.c5 * ap * (frame.axes.transpose() * model.grad_K(state.points[i])) / lambda;
}

RegionInfo classify_region(const ReducedState& state, const FlowModel& model, const FlowConfig& config) {
    RegionInfo info;
    const double band = config.hysteresis;
    for (std::size_t i = 0; i < state.p(); ++i) {
        const BubbleTag* prev = i < state.tags.size() ? &state.tags[i] : nullptr;
        BubbleTag tag;
        if (!model.points.empty()) {
            const auto [idx, dist] = model.nearest(state.points[i]);
            const bool was_anchored = prev && prev->anchor && *prev->anchor == idx;
            const double radius = prev ? threshold_with_band(config.rho_ball, was_anchored, band) : config.rho_ball;
            if (dist < radius) {
                tag.anchor = idx;
                const double s = state.lambdas[i] * dist;
                tag.scaled_offset = s;
                const bool was_inner = was_anchored && prev->zone == Zone::Inner;
                const double inner_cut = prev ? threshold_with_band(config.delta, was_inner, band) : config.delta;
                tag.zone = s < inner_cut ? Zone::Inner : Zone::Ball;
                const bool was_L2 = was_anchored && prev->L2;
                // L2 is the outside of the L1 disc, so the band is mirrored.
                const double m_cut = prev ? (was_L2 ? config.M1 * (1.0 - 0.5 * band) : config.M1 * (1.0 + 0.5 * band))
                                          : config.M1;
                tag.L2 = s > m_cut;
            }
        }
        info.tags.push_back(tag);
    }

    bool any_outside = false;
    std::set<std::size_t> seen;
    bool shared = false;
    bool all_crit = true, all_sub = true, all_plus = true;
    for (const BubbleTag& t : info.tags) {
        if (!t.anchor) {
            any_outside = true;
            continue;
        }
        if (!seen.insert(*t.anchor).second) shared = true;
        const Classification& c = model.points[*t.anchor].cls;
        if (c.in_K_beta_critical)
            all_sub = false;
        else
            all_crit = false;
        if (!c.in_K_plus) all_plus = false;
    }
    if (any_outside) {
        info.label = "outside";
    } else if (shared) {
        info.label = "shared-point";
    } else if (all_sub) {
        info.label = all_plus ? "V1^1" : "V1";
    } else if (all_crit) {
        std::string label = "V2";
        if (all_plus) {
            std::vector<std::size_t> members(seen.begin(), seen.end());
            const InteractionMatrix m = build_matrix(model.points, members, model.consts);
            if (m.rho > 0.0) label = "V2^1";
        }
        info.label = label;
    } else {
        info.label = "V1xV2";
    }
    return info;
}

void validate_state(const ReducedState& state, const FlowModel& model, const FlowConfig& config) {
    const std::size_t p = state.p();
    if (p == 0) throw Error(ErrorKind::InvalidInput, "state needs at least one bubble");
    if (state.points.size() != p || state.alphas.size() != p)
        throw Error(ErrorKind::DimensionMismatch, "state vectors have different lengths");
    for (std::size_t i = 0; i < p; ++i) {
        if (state.points[i].dim() != model.n)
            throw Error(ErrorKind::DimensionMismatch, "bubble " + std::to_string(i) + " is not on S^" +
                                                          std::to_string(model.n));
        if (!(state.lambdas[i] > 1.0 / config.epsilon))
            throw Error(ErrorKind::InvalidInput, "bubble " + std::to_string(i) + ": lambda must exceed 1/epsilon");
        if (!(state.alphas[i] >= config.alpha_min && state.alphas[i] <= config.alpha_max))
            throw Error(ErrorKind::InvalidInput, "bubble " + std::to_string(i) + ": alpha outside [alpha_min, alpha_max]");
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (!(pairwise_interaction(state, i, j, model.n, model.sigma).eps < config.epsilon))
                throw Error(ErrorKind::InvalidInput, "bubbles " + std::to_string(i) + " and " + std::to_string(j) +
                                                         " interact: eps_ij >= epsilon");
}

ReducedState make_state(std::vector<SpherePoint> points, std::vector<double> lambdas, const FlowModel& model) {
    if (points.size() != lambdas.size()) throw Error(ErrorKind::DimensionMismatch, "points and lambdas differ in length");
    ReducedState s;
    s.points = std::move(points);
    s.lambdas = std::move(lambdas);
    for (const SpherePoint& a : s.points) s.alphas.push_back(model.slaved_alpha(a));
    return s;
}

double vbar_estimate(const ReducedState& state, const FlowModel& model) {
    const int n = model.n;
    const double sigma = model.sigma;
    const double ns = n - 2.0 * sigma;
    const double beta = model.points.empty() ? ns : model.max_beta();
    double est = 0.0;
    for (std::size_t i = 0; i < state.p(); ++i) {
        est += std::pow(state.lambdas[i], -beta);
        est += model.grad_K(state.points[i]).norm() / state.lambdas[i];
        for (std::size_t j = 0; j < state.p(); ++j) {
            if (j == i) continue;
            const double e = pairwise_interaction(state, i, j, n, sigma).eps;
            est += std::pow(e, std::min(1.0, (n + 2.0 * sigma) / (2.0 * ns)));
        }
    }
    return est;
}

namespace {

// Velocity field in (log lambda, chart) coordinates with the tags frozen.
struct Field {
    std::vector<double> g_lambda;
    std::vector<Vector> g_a;
};

Field pairings(const ReducedState& s, const FlowModel& model, const FlowConfig& config) {
    Field f;
    for (std::size_t i = 0; i < s.p(); ++i) {
        f.g_lambda.push_back(lambda_velocity(s, i, model, config).total);
        f.g_a.push_back(point_velocity(s, i, model, config));
    }
    return f;
}

// Pairing <dJ, W> of the pairings `g` against coefficient velocities (ds, lambda dw).
double pair(const Field& g, const std::vector<double>& ds, const std::vector<Vector>& ldw) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) acc += g.g_lambda[i] * ds[i] + g.g_a[i].dot(ldw[i]);
    return acc;
}

struct Coords {
    std::vector<double> log_lambda;
    std::vector<Vector> w;
};

ReducedState realize(const ReducedState& base, const std::vector<TangentFrame>& charts, const Coords& c,
                     const FlowModel& model) {
    ReducedState s = base;
    for (std::size_t i = 0; i < base.p(); ++i) {
        s.lambdas[i] = std::exp(c.log_lambda[i]);
        s.points[i] = exp_map(charts[i], c.w[i]);
        s.alphas[i] = model.slaved_alpha(s.points[i]);
    }
    return s;
}

}  // namespace

ReducedState step(const ReducedState& state, const FlowModel& model, const FlowConfig& config, double& dt,
                  StepDiagnostics* diag) {
    const std::size_t p = state.p();
    ReducedState base = state;
    if (base.tags.size() != p) base.tags = classify_region(base, model, config).tags;

    std::vector<TangentFrame> charts;
    Coords x0;
    for (std::size_t i = 0; i < p; ++i) {
        charts.push_back(bubble_chart(base, i, model));
        x0.log_lambda.push_back(std::log(base.lambdas[i]));
        x0.w.push_back(log_map(charts.back(), base.points[i]));
    }

    const Field g0 = pairings(base, model, config);
    // steepest descent: ds = -g_lambda, lambda dw = -g_a
    std::vector<double> k1s(p);
    std::vector<Vector> k1w(p);
    for (std::size_t i = 0; i < p; ++i) {
        k1s[i] = -g0.g_lambda[i];
        k1w[i] = -g0.g_a[i] / base.lambdas[i];
    }

    std::size_t rejected = 0;
    for (;;) {
        if (dt < config.dt_min)
            throw Error(ErrorKind::StiffStep, "step size fell below dt_min at t = " + std::to_string(base.time));
        bool ok = true;
        Coords x1 = x0;
        for (std::size_t i = 0; i < p && ok; ++i) {
            x1.log_lambda[i] += dt * k1s[i];
            x1.w[i] += dt * k1w[i];
            if (x1.w[i].norm() >= 0.5 * M_PI) ok = false;
        }
        ReducedState s1;
        Field g1;
        if (ok) {
            try {
                s1 = realize(base, charts, x1, model);
                g1 = pairings(s1, model, config);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::KNotPositive && e.kind() != ErrorKind::ChartOverflow) throw;
                ok = false;
            }
        }
        if (!ok) {
            dt *= 0.5;
            ++rejected;
            continue;
        }

        Coords x2 = x0;
        std::vector<double> vs(p);
        std::vector<Vector> lvw(p);
        double err = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            const double k2s = -g1.g_lambda[i];
            const Vector k2w = -g1.g_a[i] / s1.lambdas[i];
            vs[i] = 0.5 * (k1s[i] + k2s);
            const Vector vw = 0.5 * (k1w[i] + k2w);
            lvw[i] = base.lambdas[i] * vw;
            x2.log_lambda[i] += dt * vs[i];
            x2.w[i] += dt * vw;
            err = std::max(err, std::abs(0.5 * dt * (k2s - k1s[i])) / config.rel_tol);
            const double width = base.lambdas[i] * (0.5 * dt * (k2w - k1w[i])).norm();
            err = std::max(err, width / (config.rel_tol * (1.0 + base.lambdas[i] * x0.w[i].norm())));
        }

        ReducedState s2;
        Field g2;
        bool accept = err <= 1.0;
        double pairing_old = pair(g0, vs, lvw);
        double pairing_new = 0.0;
        if (accept) {
            try {
                s2 = realize(base, charts, x2, model);
                g2 = pairings(s2, model, config);
                pairing_new = pair(g2, vs, lvw);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::KNotPositive && e.kind() != ErrorKind::ChartOverflow) throw;
                accept = false;
            }
        }
        accept = accept && pairing_old <= 0.0 && pairing_new <= 0.0;
        if (!accept) {
            dt *= 0.5;
            ++rejected;
            continue;
        }

        s2.time = base.time + dt;
        s2.tags = base.tags;
        s2.tags = classify_region(s2, model, config).tags;

        if (diag) {
            diag->dt = dt;
            diag->pairing = pairing_old;
            diag->pairing_after = pairing_new;
            diag->rejected = rejected;
            double coeff_max = 0.0;
            for (std::size_t i = 0; i < p; ++i) coeff_max = std::max({coeff_max, std::abs(vs[i]), lvw[i].norm()});
            diag->normalized_pairing = coeff_max > 0.0 ? pairing_old / coeff_max : 0.0;
            double bound = 0.0;
            const double c_pp = config.pp_fraction * (model.n - 2.0 * model.sigma) / 2.0;
            diag->pp_checks = 0;
            diag->pp_violations = 0;
            for (std::size_t i = 0; i < p; ++i) {
                const double beta = base.tags[i].anchor ? model.points[*base.tags[i].anchor].point.beta
                                                        : (model.points.empty() ? model.n - 2.0 * model.sigma
                                                                                : model.max_beta());
                bound += std::pow(base.lambdas[i], -beta);
                bound += model.grad_K(base.points[i]).norm() / base.lambdas[i];
                for (std::size_t j = 0; j < p; ++j) {
                    if (j == i) continue;
                    const PairInteraction pi = pairwise_interaction(s2, i, j, model.n, model.sigma);
                    if (j > i) bound += pi.eps;
                    if (s2.lambdas[i] >= s2.lambdas[j]) {
                        ++diag->pp_checks;
                        if (s2.lambdas[i] * pi.d_eps_d_lambda_i > -c_pp * pi.eps) ++diag->pp_violations;
                    }
                }
            }
            diag->bound = bound;
            diag->vbar_estimate = vbar_estimate(s2, model);
        }

        double factor = err > 0.0 ? 0.9 / std::sqrt(err) : 2.0;
        factor = std::clamp(factor, 0.5, 2.0);
        if (rejected > 0) factor = std::min(factor, 1.0);
        dt *= factor;
        return s2;
    }
}

FlowOutcome run_to_infinity(const ReducedState& initial, const FlowModel& model, const FlowConfig& config,
                            bool record_trajectory) {
    config.validate();
    validate_state(initial, model, config);

    FlowOutcome out;
    ReducedState state = initial;
    RegionInfo region = classify_region(state, model, config);
    state.tags = region.tags;
    double dt = std::min(config.dt_init, config.t_max - state.time);
    double c_min = std::numeric_limits<double>::infinity();

    auto sample = [&](double pairing) {
        if (!record_trajectory) return;
        out.trajectory.push_back({state.time, state.lambdas, state.points, state.tags, region.label, pairing});
    };
    sample(0.0);

    auto finish = [&](FlowOutcomeKind kind, std::string reason) {
        out.kind = kind;
        out.reason = std::move(reason);
        out.final_state = state;
        for (const BubbleTag& t : state.tags) {
            out.limit_tuple.push_back(t.anchor);
            out.limit_weights.push_back(t.anchor ? std::pow(model.points[*t.anchor].point.K_val,
                                                            -(model.n - 2.0 * model.sigma) / 2.0)
                                                 : std::numeric_limits<double>::quiet_NaN());
        }
        out.theorem_bound_c = std::isfinite(c_min) ? c_min : 0.0;
        return out;
    };

    for (;;) {
        bool all_capped = true;
        for (double l : state.lambdas) all_capped = all_capped && l >= config.lambda_cap;
        if (all_capped) return finish(FlowOutcomeKind::BlowUp, "every lambda reached lambda_cap");
        for (std::size_t i = 0; i < state.p(); ++i) {
            if (state.lambdas[i] <= 1.0 / config.epsilon)
                return finish(FlowOutcomeKind::Exit, "lambda of bubble " + std::to_string(i) + " fell to 1/epsilon");
            if (state.alphas[i] < config.alpha_min || state.alphas[i] > config.alpha_max)
                return finish(FlowOutcomeKind::Exit, "alpha of bubble " + std::to_string(i) + " left its bounds");
            for (std::size_t j = i + 1; j < state.p(); ++j)
                if (pairwise_interaction(state, i, j, model.n, model.sigma).eps >= config.epsilon)
                    return finish(FlowOutcomeKind::Exit, "bubbles " + std::to_string(i) + " and " +
                                                             std::to_string(j) + " interact (eps_ij >= epsilon)");
        }
        if (state.time >= config.t_max) return finish(FlowOutcomeKind::Timeout, "reached t_max");
        if (out.steps >= config.max_steps) return finish(FlowOutcomeKind::Timeout, "reached max_steps");

        dt = std::min(dt, config.t_max - state.time);
        StepDiagnostics diag;
        state = step(state, model, config, dt, &diag);
        region = classify_region(state, model, config);
        ++out.steps;
        out.rejected += diag.rejected;
        out.max_pairing = std::max(out.max_pairing, diag.pairing);
        if (diag.pairing > 0.0) ++out.pairing_violations;
        out.pp_checks += diag.pp_checks;
        out.pp_violations += diag.pp_violations;
        out.vbar_estimate_max = std::max(out.vbar_estimate_max, diag.vbar_estimate);
        if (diag.bound > 0.0 && diag.normalized_pairing < 0.0)
            c_min = std::min(c_min, -diag.normalized_pairing / diag.bound);
        sample(diag.pairing);
    }
}

}  // namespace fnir

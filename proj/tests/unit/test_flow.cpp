#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fnirenberg/error.hpp"
#include "fnirenberg/flow.hpp"
#include "oracles.hpp"

using namespace fnir;

namespace {

FlowModel flat_model(std::vector<ClassifiedPoint> pts, int n = 3, double sigma = 0.5) {
    FlowModel m;
    m.n = n;
    m.sigma = sigma;
    m.consts = build_constants(n, sigma);
    m.points = std::move(pts);
    return m;
}

/// North-pole maximum (sum b < 0) and south-pole minimum (sum b > 0), both with K = 1.
FlowModel poles_model(double beta = 1.5) {
    Vector down(3), up(3);
    down << -1, -1, -1;
    up << 1, 1, 1;
    return flat_model({oracle::make_point(SpherePoint::north_pole(3), 1.0, beta, down, 3, 0.5),
                       oracle::make_point(SpherePoint::south_pole(3), 1.0, beta, up, 3, 0.5)});
}

ReducedState two_bubbles(std::mt19937_64& g, int n) {
    std::uniform_real_distribution<double> L(std::log(5.0), std::log(500.0));
    ReducedState s;
    for (int i = 0; i < 2; ++i) {
        s.points.push_back(oracle::random_point(g, n));
        s.lambdas.push_back(std::exp(L(g)));
        s.alphas.push_back(1.0);
    }
    return s;
}

double eps_of(const SpherePoint& a, const SpherePoint& b, double li, double lj, int n, double sigma) {
    const double d2 = (a.coords() - b.coords()).squaredNorm();
    return std::pow(li / lj + lj / li + li * lj * d2, (2 * sigma - n) / 2);
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("interaction examples and symmetry") {
    ReducedState s;
    s.points = {SpherePoint::north_pole(2), SpherePoint::north_pole(2)};
    s.lambdas = {7.0, 7.0};
    s.alphas = {1.0, 1.0};
    CHECK(pairwise_interaction(s, 0, 1, 2, 0.5).eps == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(pairwise_interaction(s, 0, 0, 2, 0.5), Error);

    auto g = oracle::rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const ReducedState r = two_bubbles(g, 3);
        CHECK(pairwise_interaction(r, 0, 1, 3, 0.3).eps == pairwise_interaction(r, 1, 0, 3, 0.3).eps);
    }
}

TEST_CASE("interaction derivatives match central differences") {
    auto g = oracle::rng(2718);
    std::uniform_real_distribution<double> S(0.1, 0.9);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + trial % 4;
        const double sigma = S(g);
        const ReducedState s = two_bubbles(g, n);
        const PairInteraction pi = pairwise_interaction(s, 0, 1, n, sigma);
        const double li = s.lambdas[0], lj = s.lambdas[1];
        const SpherePoint &ai = s.points[0], &aj = s.points[1];

        const double h = 1e-6 * li;
        const double fd_l = (eps_of(ai, aj, li + h, lj, n, sigma) - eps_of(ai, aj, li - h, lj, n, sigma)) / (2 * h);
        CHECK(std::abs(fd_l - pi.d_eps_d_lambda_i) <= 1e-6 * std::max(std::abs(pi.d_eps_d_lambda_i), pi.eps / li));

        const TangentFrame f = normal_frame(ai, 0);
        const double ha = 1e-6;
        for (int k = 0; k < n; ++k) {
            Vector v = Vector::Zero(n);
            v[k] = ha;
            const double plus = eps_of(exp_map(f, v), aj, li, lj, n, sigma);
            const double minus = eps_of(exp_map(f, -v), aj, li, lj, n, sigma);
            const double fd = (plus - minus) / (2 * ha);
            CHECK(std::abs(fd - pi.d_eps_d_a_i[k]) <= 1e-6 * std::max(pi.d_eps_d_a_i.norm(), pi.eps));
        }
    }
}

TEST_CASE("eps depends only on the ratio and the scaled distance") {
    auto g = oracle::rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        ReducedState s = two_bubbles(g, 3);
        const TangentFrame f = normal_frame(s.points[0], 0);
        Vector v = Vector::Zero(3);
        v[0] = 0.3;
        s.points[1] = exp_map(f, v);
        const double e0 = pairwise_interaction(s, 0, 1, 3, 0.4).eps;
        // rescale both lambdas by t and shrink the chordal distance by 1/t
        const double t = 3.0, d = chordal_distance(s.points[0], s.points[1]);
        ReducedState r = s;
        r.lambdas = {t * s.lambdas[0], t * s.lambdas[1]};
        v[0] = 2 * std::asin(d / t / 2);
        r.points[1] = exp_map(f, v);
        CHECK(pairwise_interaction(r, 0, 1, 3, 0.4).eps == doctest::Approx(e0).epsilon(1e-12));
    }
}

TEST_CASE("lambda pairing signs at a critical point") {
    FlowModel m = poles_model();
    const FlowConfig cfg;
    ReducedState s = make_state({SpherePoint::north_pole(3)}, {300.0}, m);
    s.tags = classify_region(s, m, cfg).tags;
    CHECK(s.tags[0].zone == Zone::Inner);
    const LambdaPairing at_max = lambda_velocity(s, 0, m, cfg);
    CHECK(at_max.total < 0);
    CHECK(at_max.interaction_term == 0.0);
    // inner closed form
    const double expect = 2 * (2.0 / 6.0) * 1.5 * m.consts.c3(1.5) * (-3.0) * std::pow(300.0, -1.5);
    CHECK(at_max.total == doctest::Approx(expect).epsilon(1e-12));

    s = make_state({SpherePoint::south_pole(3)}, {300.0}, m);
    s.tags = classify_region(s, m, cfg).tags;
    CHECK(lambda_velocity(s, 0, m, cfg).total > 0);
}

TEST_CASE("interaction term re-evaluated term by term") {
    FlowModel m = poles_model();
    const FlowConfig cfg;
    auto g = oracle::rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        ReducedState s = two_bubbles(g, 3);
        s.lambdas = {1e3 * (1 + trial), 1e3 * (1 + trial)};
        s.alphas = {0.8, 1.3};
        const double li = s.lambdas[0], lj = s.lambdas[1];
        const double d2 = (s.points[0].coords() - s.points[1].coords()).squaredNorm();
        const double T = li / lj + lj / li + li * lj * d2;
        const double dT = 1 / lj - lj / (li * li) + lj * d2;
        const double deps = -1.0 * std::pow(T, -2.0) * dT;  // (2s - n)/2 = -1
        const LambdaPairing lp = lambda_velocity(s, 0, m, cfg);
        const double expect = -m.consts.c2 * s.alphas[1] * li * deps;
        CHECK(std::abs(lp.interaction_term - expect) <= 1e-12 * std::abs(expect));
    }
}

TEST_CASE("moments: odd symmetry and the large-offset asymptote") {
    for (int n : {3, 4}) {
        const double beta = 0.5 * (1 + n);
        CHECK(translation_moment(n, beta, 0.0) == 0.0);
        CHECK(translation_moment(n, beta, -2.0) == doctest::Approx(-translation_moment(n, beta, 2.0)).epsilon(1e-10));
        const double s = 1e3;
        const double asym_t = beta * std::pow(s, beta - 1) * moment_integral(n, 2.0, n + 1.0);
        CHECK(std::abs(translation_moment(n, beta, s) / asym_t - 1) < 0.05);
        CHECK(std::abs(translation_moment(n, beta, -s) / -asym_t - 1) < 0.05);
        const double asym_d = (beta - 1) * std::pow(s, beta - 2) * moment_integral(n, 2.0, n);
        CHECK(std::abs(dilation_moment(n, beta, s) / asym_d - 1) < 0.05);
        // s = 0 closed form: Int |x_k|^beta (1+|x|^2)^{-n}
        CHECK(dilation_moment(n, beta, 0.0) == doctest::Approx(moment_integral(n, beta, n)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(translation_moment(3, 3.5, 1.0), Error);
}

TEST_CASE("point velocity") {
    FlowModel m = poles_model();
    const FlowConfig cfg;
    ReducedState s = make_state({SpherePoint::north_pole(3)}, {300.0}, m);
    s.tags = classify_region(s, m, cfg).tags;
    CHECK(point_velocity(s, 0, m, cfg).norm() == 0.0);

    FlowModel smooth;
    smooth.n = 2;
    smooth.sigma = 0.5;
    smooth.consts = build_constants(2, 0.5);
    smooth.K = parse_expression("2 + x1");
    auto g = oracle::rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        ReducedState r = make_state({oracle::random_point(g, 2)}, {500.0}, smooth);
        r.tags = classify_region(r, smooth, cfg).tags;
        const Vector v = point_velocity(r, 0, smooth, cfg);
        const Vector grad = normal_frame(r.points[0], 0).axes.transpose() * smooth.grad_K(r.points[0]);
        CHECK(v.dot(grad) < 0);
        CHECK((v / v.norm() + grad / grad.norm()).norm() < 1e-6);
    }
}

TEST_CASE("region tags") {
    FlowModel m = poles_model();
    const FlowConfig cfg;
    const double lambda = 1e3;
    const TangentFrame f = m.points[0].point.frame;
    Vector v = Vector::Zero(3);
    ReducedState s = make_state({SpherePoint::north_pole(3)}, {lambda}, m);
    RegionInfo r = classify_region(s, m, cfg);
    CHECK_FALSE(r.tags[0].L2);
    CHECK(*r.tags[0].anchor == 0);
    CHECK(r.label == "V1^1");
    v[0] = 2 * cfg.M1 / lambda;
    s = make_state({exp_map(f, v)}, {lambda}, m);
    r = classify_region(s, m, cfg);
    CHECK(r.tags[0].L2);
    CHECK(r.tags[0].zone == Zone::Ball);

    Vector down(3);
    down << -1, -2, 0.5;
    FlowModel plus = flat_model({oracle::make_point(SpherePoint::north_pole(3), 1.0, 1.5, down, 3, 0.5),
                                 oracle::make_point(SpherePoint::south_pole(3), 1.0, 1.5, down, 3, 0.5)});
    s = make_state({SpherePoint::north_pole(3), SpherePoint::south_pole(3)}, {lambda, lambda}, plus);
    CHECK(classify_region(s, plus, cfg).label == "V1^1");
    s = make_state({SpherePoint::north_pole(3), SpherePoint::north_pole(3)}, {lambda, 1e6}, plus);
    CHECK(classify_region(s, plus, cfg).label == "shared-point");
    v[0] = 3 * cfg.rho_ball;
    s = make_state({exp_map(f, v)}, {lambda}, plus);
    CHECK(classify_region(s, plus, cfg).label == "outside");
}

TEST_CASE("hysteresis keeps a tag inside the band") {
    FlowModel m = poles_model();
    const FlowConfig cfg;
    const TangentFrame f = m.points[0].point.frame;
    Vector v = Vector::Zero(3);
    v[0] = cfg.rho_ball * 1.02;
    ReducedState s = make_state({exp_map(f, v)}, {1e3}, m);
    CHECK_FALSE(classify_region(s, m, cfg).tags[0].anchor.has_value());
    BubbleTag inside;
    inside.anchor = 0;
    inside.zone = Zone::Ball;
    inside.L2 = true;
    s.tags = {inside};
    CHECK(classify_region(s, m, cfg).tags[0].anchor.has_value());
}

TEST_CASE("state validation") {
    FlowModel m = poles_model();
    FlowConfig cfg;
    ReducedState s = make_state({SpherePoint::north_pole(3)}, {50.0}, m);
    CHECK_THROWS_AS(validate_state(s, m, cfg), Error);
    s = make_state({SpherePoint::north_pole(3), SpherePoint::north_pole(3)}, {200.0, 200.0}, m);
    CHECK_THROWS_AS(validate_state(s, m, cfg), Error);
    s.points = {SpherePoint::north_pole(2)};
    s.lambdas = {200.0};
    s.alphas = {1.0};
    CHECK_THROWS_AS(validate_state(s, m, cfg), Error);
    cfg.dt_min = 2.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = FlowConfig{};
    cfg.epsilon = 1.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("single bubble at a maximum grows every step and blows up") {
    FlowModel m = poles_model();
    FlowConfig cfg;
    ReducedState s = make_state({SpherePoint::north_pole(3)}, {200.0}, m);
    double dt = cfg.dt_init;
    for (int k = 0; k < 50; ++k) {
        const ReducedState next = step(s, m, cfg, dt);
        CHECK(next.lambdas[0] > s.lambdas[0]);
        s = next;
    }
    const FlowOutcome out = run_to_infinity(make_state({SpherePoint::north_pole(3)}, {200.0}, m), m, cfg);
    CHECK(out.kind == FlowOutcomeKind::BlowUp);
    CHECK(out.pairing_violations == 0);
    REQUIRE(out.limit_tuple.size() == 1);
    CHECK(*out.limit_tuple[0] == 0);
    CHECK(out.limit_weights[0] == 1.0);
    CHECK(out.theorem_bound_c > 0);
}

TEST_CASE("single bubble at a minimum exits") {
    FlowModel m = poles_model();
    const FlowOutcome out = run_to_infinity(make_state({SpherePoint::south_pole(3)}, {200.0}, m), m, FlowConfig{});
    CHECK(out.kind != FlowOutcomeKind::BlowUp);
    CHECK(out.final_state.lambdas[0] <= 200.0);
}

TEST_CASE("two bubbles at one point never both blow up") {
    FlowModel m = poles_model();
    const ReducedState s = make_state({SpherePoint::north_pole(3), SpherePoint::north_pole(3)}, {1e5, 200.0}, m);
    const FlowOutcome out = run_to_infinity(s, m, FlowConfig{});
    CHECK(out.kind != FlowOutcomeKind::BlowUp);
    CHECK(out.pp_checks > 0);
    CHECK(out.pp_violations == 0);
    CHECK(out.pairing_violations == 0);
}

TEST_CASE("bubbles near a positive critical tuple converge to it") {
    const Constants c = build_constants(3, 0.5);
    // pair of beta-critical maxima; scale b so that the diagonal dominates the coupling
    Vector b = Vector::Constant(3, -3.0 * std::max(1.0, c.c1 / c.c1_tilde));
    FlowModel m = flat_model({oracle::make_point(SpherePoint::north_pole(3), 1.0, 2.0, b, 3, 0.5),
                              oracle::make_point(SpherePoint::south_pole(3), 1.0, 2.0, b, 3, 0.5)});
    REQUIRE(build_matrix(m.points, m.consts).rho > 0);
    Vector v = Vector::Zero(3);
    v[1] = 2e-4;
    const SpherePoint a0 = exp_map(m.points[0].point.frame, v), a1 = exp_map(m.points[1].point.frame, -v);
    const FlowOutcome out = run_to_infinity(make_state({a0, a1}, {300.0, 300.0}, m), m, FlowConfig{});
    REQUIRE(out.kind == FlowOutcomeKind::BlowUp);
    CHECK(*out.limit_tuple[0] == 0);
    CHECK(*out.limit_tuple[1] == 1);
    CHECK(geodesic_distance(out.final_state.points[0], m.points[0].point.y) < 1e-3);
    CHECK(geodesic_distance(out.final_state.points[1], m.points[1].point.y) < 1e-3);
    CHECK(out.pairing_violations == 0);
}

TEST_CASE("v-bar estimate") {
    FlowModel m = poles_model();
    const ReducedState s = make_state({SpherePoint::north_pole(3)}, {400.0}, m);
    CHECK(vbar_estimate(s, m) == doctest::Approx(std::pow(400.0, -1.5)).epsilon(1e-12));
}

}  // TEST_SUITE

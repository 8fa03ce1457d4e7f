#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fnirenberg/census.hpp"
#include "fnirenberg/error.hpp"
#include "oracles.hpp"

using namespace fnir;

namespace {

constexpr int kN = 3;
constexpr double kSigma = 0.5;

ClassifiedPoint sub_point(const SpherePoint& y, int negatives, double beta = 1.5) {
    Vector b(kN);
    for (int k = 0; k < kN; ++k) b[k] = k < negatives ? -1.0 : 0.5;
    return oracle::make_point(y, 1.0, beta, b, kN, kSigma);
}

TupleRecord record(Family f, int sign, std::size_t p = 1) {
    TupleRecord r;
    r.family = f;
    r.sign = sign;
    r.members.resize(p);
    std::iota(r.members.begin(), r.members.end(), 0);
    r.index_inf = sign > 0 ? 0 : 1;
    return r;
}

Census run(const std::vector<ClassifiedPoint>& pts, const CensusOptions& opts = {}) {
    const Constants c = build_constants(kN, kSigma);
    return enumerate_families(pts, check_A1(pts, c), kN, opts);
}

std::vector<ClassifiedPoint> random_config(std::mt19937_64& g, std::size_t count, bool with_critical) {
    std::uniform_int_distribution<int> neg(1, kN);
    std::bernoulli_distribution coin(0.5);
    std::vector<ClassifiedPoint> pts;
    while (pts.size() < count) {
        const SpherePoint y = oracle::random_point(g, kN);
        bool far = true;
        for (const auto& q : pts) far = far && geodesic_distance(q.point.y, y) > 0.2;
        if (!far) continue;
        const int k = neg(g);
        const bool sum_neg = k == kN || coin(g);
        const bool critical = with_critical && coin(g) && sum_neg;
        pts.push_back(oracle::make_point(y, 1.0, critical ? kN - 2 * kSigma : 1.5,
                                         oracle::random_b(g, kN, k, sum_neg), kN, kSigma));
    }
    return pts;
}

}  // namespace

TEST_SUITE("census") {

TEST_CASE("index at infinity examples") {
    const std::vector<ClassifiedPoint> one{sub_point(SpherePoint::north_pole(3), 3)};
    const Census c1 = run(one);
    REQUIRE(c1.records.size() == 1);
    CHECK(c1.records[0].index_inf == 0);
    CHECK(c1.records[0].sign == 1);
    CHECK(c1.records[0].family == Family::SubCritical);

    const std::vector<ClassifiedPoint> two{sub_point(SpherePoint::north_pole(3), 2),
                                           sub_point(SpherePoint::south_pole(3), 2)};
    const Census c2 = run(two);
    REQUIRE(c2.records.size() == 3);
    CHECK(c2.records[0].index_inf == 1);
    CHECK(c2.records[1].index_inf == 1);
    CHECK(c2.records[2].index_inf == 3);
    for (const auto& r : c2.records) CHECK(r.sign == -1);

    const Certificate cert = evaluate_certificate(c2.records, Theorem::TH2, 2);
    CHECK(cert.B == -3);
    CHECK(oracle::subset_sum({1, 1}) == -3);
    CHECK(cert.S == -3);
    CHECK(cert.brute_force_agrees);
}

TEST_CASE("points outside K+ do not enter the families") {
    Vector b(kN);
    b << 1, 1, -0.5;
    const std::vector<ClassifiedPoint> pts{oracle::make_point(SpherePoint::north_pole(3), 1, 1.5, b, kN, kSigma)};
    CHECK(run(pts).records.empty());
}

TEST_CASE("critical pair with negative rho keeps only the singletons") {
    const Constants c = build_constants(kN, kSigma);
    // antipodal pair, K = 1: g = 2^{(n-2s)/2} c1 G, G = 1/2; choose the diagonal a = g / 2.
    const double g = 2.0 * c.c1 * 0.5;
    const double bsum = -(g / 2) * kN / ((kN - 2 * kSigma) * c.c1_tilde);
    Vector b(kN);
    b << bsum / 3, bsum / 3, bsum / 3;
    const std::vector<ClassifiedPoint> pts{oracle::make_point(SpherePoint::north_pole(3), 1, 2.0, b, kN, kSigma),
                                           oracle::make_point(SpherePoint::south_pole(3), 1, 2.0, b, kN, kSigma)};
    const A1Report a1 = check_A1(pts, c);
    REQUIRE(a1.tuples.size() == 3);
    CHECK(a1.tuples[2].matrix.rho < 0);
    const Census census = enumerate_families(pts, a1, kN);
    REQUIRE(census.records.size() == 2);
    for (const auto& r : census.records) {
        CHECK(r.family == Family::BetaCritical);
        CHECK(r.p() == 1);
        CHECK(*r.rho > 0);
    }
}

TEST_CASE("certificate arithmetic examples") {
    std::vector<TupleRecord> recs{record(Family::BetaCritical, -1)};
    Certificate c = evaluate_certificate(recs, Theorem::TH2, 1);
    CHECK(c.A == -1);
    CHECK(c.B == 0);
    CHECK(c.S == -1);
    CHECK(*c.exists);

    for (int B : {-3, -1, 0, 1, 2}) {
        recs = {record(Family::BetaCritical, 1)};
        for (int k = 0; k < std::abs(B); ++k) recs.push_back(record(Family::SubCritical, B > 0 ? 1 : -1, 2));
        c = evaluate_certificate(recs, Theorem::TH2, 0, 0);
        CHECK(c.A == 1);
        CHECK(c.B == B);
        CHECK(c.S == 1);
        CHECK_FALSE(*c.exists);
    }

    c = evaluate_certificate(recs, Theorem::NotApplicable);
    CHECK_FALSE(c.exists.has_value());
    CHECK_FALSE(c.caveats.empty());
}

TEST_CASE("TH1 counts sub-critical singletons only") {
    const std::vector<ClassifiedPoint> two{sub_point(SpherePoint::north_pole(3), 2, 2.5),
                                           sub_point(SpherePoint::south_pole(3), 2, 2.5)};
    CHECK(determine_regime(two, kN, kSigma) == Theorem::TH1);
    const Census census = run(two);
    const Certificate c = evaluate_certificate(census.records, Theorem::TH1, 2);
    CHECK(c.B == -2);
    CHECK(c.S == -2);
    CHECK(c.brute_force_agrees);
    const auto trace = euler_trace(census.records, Theorem::TH1);
    REQUIRE(trace.size() == 2);
    CHECK(trace.back() == c.S);
}

TEST_CASE("regime determination") {
    const SpherePoint np = SpherePoint::north_pole(3), sp = SpherePoint::south_pole(3);
    CHECK(determine_regime({}, kN, kSigma) == Theorem::TH2);
    std::vector<ClassifiedPoint> pts{sub_point(np, 3, 1.5), sub_point(sp, 3, 1.8)};
    CHECK(determine_regime(pts, kN, kSigma) == Theorem::TH2);
    pts = {sub_point(np, 3, 2.5), sub_point(sp, 3, 2.9)};
    CHECK(determine_regime(pts, kN, kSigma) == Theorem::TH1);
    pts = {sub_point(np, 3, 1.5), sub_point(sp, 3, 2.5)};
    CHECK(determine_regime(pts, kN, kSigma) == Theorem::NotApplicable);
    pts = {sub_point(np, 3, 2.0), sub_point(sp, 3, 2.0)};
    CHECK(determine_regime(pts, kN, kSigma) == Theorem::TH2);
}

TEST_CASE("euler trace") {
    CHECK(euler_trace({}, Theorem::TH2).empty());
    const std::vector<TupleRecord> one{record(Family::SubCritical, 1)};
    CHECK(euler_trace(one, Theorem::TH2) == std::vector<long long>{1});

    auto g = oracle::rng(404);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = random_config(g, 1 + trial % 7, true);
        const Census census = run(pts);
        const Theorem th = determine_regime(pts, kN, kSigma);
        const Certificate c = evaluate_certificate(census.records, th, pts.size());
        const auto trace = euler_trace(census.records, th);
        CHECK((trace.empty() ? 0 : trace.back()) == c.S);
    }
}

TEST_CASE("closed forms agree with brute-force subset sums") {
    CHECK(subset_sum_closed_form(std::vector<int>{}) == 0);
    CHECK(subset_sum_closed_form(std::vector<int>{-1, -1}) == -3);
    auto g = oracle::rng(77);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 12;
        std::vector<int> n_minus, signs;
        for (std::size_t i = 0; i < m; ++i) {
            const int d = coin(g) ? 1 : 2;
            n_minus.push_back(d);
            signs.push_back(d % 2 == 0 ? 1 : -1);
        }
        CHECK(subset_sum_closed_form(signs) == oracle::subset_sum(n_minus));
    }
}

TEST_CASE("A, B and S are invariant under relabeling") {
    auto g = oracle::rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        auto pts = random_config(g, 2 + trial % 5, true);
        const Theorem th = determine_regime(pts, kN, kSigma);
        const Certificate c = evaluate_certificate(run(pts).records, th, pts.size());
        std::shuffle(pts.begin(), pts.end(), g);
        const Certificate d = evaluate_certificate(run(pts).records, th, pts.size());
        CHECK(c.A == d.A);
        CHECK(c.B == d.B);
        CHECK(c.S == d.S);
        for (auto& q : pts) q.point.K_val *= 2.5;
        const Certificate e = evaluate_certificate(run(pts).records, th, pts.size());
        CHECK(e.exists == c.exists);
    }
}

TEST_CASE("cross records pair every critical tuple with every sub-critical tuple") {
    auto g = oracle::rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_config(g, 3 + trial % 4, true);
        const Census census = run(pts);
        long long A = 0, B = 0, cross = 0;
        for (const auto& r : census.records) {
            if (r.family == Family::BetaCritical) A += r.sign;
            if (r.family == Family::SubCritical) B += r.sign;
            if (r.family == Family::Cross) {
                cross += r.sign;
                CHECK(r.sign == -census.records[*r.beta_part].sign * census.records[*r.sub_part].sign);
            }
        }
        CHECK(cross == -A * B);
    }
}

TEST_CASE("max_p truncation and the record limit") {
    std::vector<ClassifiedPoint> pts;
    for (const auto& y : quasi_uniform_points(kN, 21, 1)) pts.push_back(sub_point(y, 3));
    try {
        run(pts);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CensusTooLarge);
    }
    CensusOptions capped;
    capped.max_p = 2;
    const Census c = run(pts, capped);
    CHECK(c.truncated);
    CHECK(c.records.size() == 21 + 210);
}

TEST_CASE("ordered-tuple diagnostic weights subsets by p!") {
    const std::vector<ClassifiedPoint> two{sub_point(SpherePoint::north_pole(3), 2),
                                           sub_point(SpherePoint::south_pole(3), 2)};
    const Certificate c = evaluate_certificate(run(two).records, Theorem::TH2, 2, 12, true);
    REQUIRE(c.S_ordered.has_value());
    CHECK(*c.S_ordered == -1 - 1 - 2);
    CHECK(c.S == -3);
}

}  // TEST_SUITE

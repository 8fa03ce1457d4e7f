#include "fnirenberg/census.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "fnirenberg/error.hpp"

namespace fnir {

namespace {

constexpr std::size_t kRecordLimit = std::size_t{1} << 20;

int parity_sign(int index) { return index % 2 == 0 ? 1 : -1; }

long long factorial(std::size_t p) {
    long long f = 1;
    for (std::size_t i = 2; i <= p; ++i) f *= static_cast<long long>(i);
    return f;
}

std::size_t subset_count(std::size_t m, std::size_t cap) {
    std::size_t total = 0;
    std::size_t binom = 1;  // C(m, k)
    for (std::size_t k = 1; k <= cap && k <= m; ++k) {
        binom = binom * (m - k + 1) / k;
        total += binom;
        if (total > kRecordLimit * 4) break;
    }
    return total;
}

bool canonical_less(const TupleRecord& a, const TupleRecord& b) {
    if (a.p() != b.p()) return a.p() < b.p();
    if (a.index_inf != b.index_inf) return a.index_inf < b.index_inf;
    if (a.family != b.family) return a.family < b.family;
    return a.members < b.members;
}

}  // namespace

std::string_view family_name(Family f) {
    switch (f) {
        case Family::BetaCritical: return "beta-critical";
        case Family::SubCritical: return "sub-critical";
        case Family::Cross: return "cross";
    }
    return "?";
}

std::string_view theorem_name(Theorem t) {
    switch (t) {
        case Theorem::TH2: return "TH2";
        case Theorem::TH1: return "TH1";
        case Theorem::NotApplicable: return "not-applicable";
    }
    return "?";
}

int index_at_infinity(std::span<const ClassifiedPoint> points, std::span<const std::size_t> members, int n) {
    int index = static_cast<int>(members.size()) - 1;
    for (std::size_t m : members) index += n - points[m].cls.itilde;
    return index;
}

Census enumerate_families(std::span<const ClassifiedPoint> points, const A1Report& a1, int n,
                          const CensusOptions& opts) {
    std::vector<std::size_t> sub_stratum;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].cls.in_K_plus && !points[i].cls.in_K_beta_critical) sub_stratum.push_back(i);
    const std::size_t sub_cap = opts.max_p == 0 ? sub_stratum.size() : std::min(opts.max_p, sub_stratum.size());

    const std::size_t beta_bound = a1.tuples.size();
    const std::size_t sub_bound = subset_count(sub_stratum.size(), sub_cap);
    const std::size_t cross_bound = opts.include_cross ? beta_bound * sub_bound : 0;
    if (!opts.force && beta_bound + sub_bound + cross_bound > kRecordLimit)
        throw Error(ErrorKind::CensusTooLarge, "census would hold " +
                                                   std::to_string(beta_bound + sub_bound + cross_bound) +
                                                   " records (limit 2^20); pass force to override");

    Census census;
    census.truncated = a1.truncated || sub_cap < sub_stratum.size();

    for (const A1Entry& entry : a1.tuples) {
        if (entry.sign == SpectralSign::Degenerate) {
            census.degenerate.push_back(entry.matrix.members);
            continue;
        }
        if (entry.sign != SpectralSign::Positive) continue;
        TupleRecord r;
        r.members = entry.matrix.members;
        std::sort(r.members.begin(), r.members.end());
        r.family = Family::BetaCritical;
        r.index_inf = index_at_infinity(points, r.members, n);
        r.sign = parity_sign(r.index_inf);
        r.rho = entry.matrix.rho;
        census.records.push_back(std::move(r));
    }
    const std::size_t beta_end = census.records.size();

    for (std::size_t size = 1; size <= sub_cap; ++size) {
        for (const auto& combo : combinations(sub_stratum.size(), size)) {
            TupleRecord r;
            for (std::size_t c : combo) r.members.push_back(sub_stratum[c]);
            r.family = Family::SubCritical;
            r.index_inf = index_at_infinity(points, r.members, n);
            r.sign = parity_sign(r.index_inf);
            census.records.push_back(std::move(r));
        }
    }
    const std::size_t sub_end = census.records.size();

    if (opts.include_cross) {
        for (std::size_t bi = 0; bi < beta_end; ++bi) {
            for (std::size_t si = beta_end; si < sub_end; ++si) {
                TupleRecord r;
                const auto& bm = census.records[bi].members;
                const auto& sm = census.records[si].members;
                std::merge(bm.begin(), bm.end(), sm.begin(), sm.end(), std::back_inserter(r.members));
                r.family = Family::Cross;
                // index of the union = i(tau) + i(tau') + 1
                r.index_inf = index_at_infinity(points, r.members, n);
                r.sign = parity_sign(r.index_inf);
                r.beta_part = bi;
                r.sub_part = si;
                census.records.push_back(std::move(r));
            }
        }
    }
    return census;
}

Theorem determine_regime(std::span<const ClassifiedPoint> points, int n, double sigma) {
    const double critical = n - 2.0 * sigma;
    bool all_low = true;   // every beta in (1, n - 2 sigma]
    bool all_high = true;  // every beta in [n - 2 sigma, n)
    for (const ClassifiedPoint& cp : points) {
        if (cp.cls.in_K_beta_critical) continue;
        if (cp.point.beta < critical)
            all_high = false;
        else
            all_low = false;
    }
    if (all_low) return Theorem::TH2;
    if (all_high) return Theorem::TH1;
    return Theorem::NotApplicable;
}

std::vector<std::size_t> active_records(std::span<const TupleRecord> records, Theorem regime) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const TupleRecord& r = records[i];
        switch (regime) {
            case Theorem::TH2: active.push_back(i); break;
            case Theorem::TH1:
                if (r.family == Family::BetaCritical || (r.family == Family::SubCritical && r.p() == 1))
                    active.push_back(i);
                break;
            case Theorem::NotApplicable: break;
        }
    }
    std::stable_sort(active.begin(), active.end(),
                     [&](std::size_t a, std::size_t b) { return canonical_less(records[a], records[b]); });
    return active;
}

std::vector<long long> euler_trace(std::span<const TupleRecord> records, Theorem regime) {
    std::vector<long long> trace;
    long long chi = 0;
    for (std::size_t i : active_records(records, regime)) {
        chi += records[i].sign;
        trace.push_back(chi);
    }
    return trace;
}

long long subset_sum_closed_form(std::span<const int> point_signs) {
    long long prod = 1;
    for (int s : point_signs) prod *= 1 - s;
    return 1 - prod;
}

Certificate evaluate_certificate(std::span<const TupleRecord> records, Theorem regime, std::size_t point_count,
                                 std::size_t brute_force_limit, bool ordered_tuples) {
    Certificate cert;
    cert.theorem = regime;
    if (regime == Theorem::NotApplicable) {
        cert.caveats.emplace_back("mixed flatness regimes: neither existence criterion applies");
        return cert;
    }

    long long A = 0, B = 0, A_ord = 0, B_ord = 0, cross_records = 0;
    std::size_t sub_count = 0;
    std::vector<int> singleton_signs;
    bool has_cross = false;
    for (const TupleRecord& r : records) {
        switch (r.family) {
            case Family::BetaCritical:
                A += r.sign;
                A_ord += r.sign * factorial(r.p());
                break;
            case Family::SubCritical:
                if (r.p() == 1) singleton_signs.push_back(r.sign);
                ++sub_count;
                if (regime == Theorem::TH1 && r.p() != 1) break;
                B += r.sign;
                B_ord += r.sign * factorial(r.p());
                break;
            case Family::Cross:
                has_cross = true;
                cross_records += r.sign;
                break;
        }
    }

    cert.A = A;
    cert.B = B;
    if (regime == Theorem::TH2) {
        cert.cross = A * B;
        cert.S = A + B - cert.cross;
        if (ordered_tuples) cert.S_ordered = A_ord + B_ord - A_ord * B_ord;
    } else {
        cert.cross = 0;
        cert.S = A + B;
        if (ordered_tuples) cert.S_ordered = A_ord + B_ord;
    }
    cert.exists = cert.S != 1;

    if (point_count <= brute_force_limit) {
        bool agree = true;
        if (regime == Theorem::TH2) {
            long long double_loop = 0;
            for (const TupleRecord& a : records) {
                if (a.family != Family::BetaCritical) continue;
                for (const TupleRecord& b : records)
                    if (b.family == Family::SubCritical) double_loop += static_cast<long long>(a.sign) * b.sign;
            }
            agree = agree && double_loop == cert.cross;
            if (has_cross) agree = agree && cross_records == -cert.cross;
            agree = agree && cert.S == 1 - (1 - A) * (1 - B);
            const std::size_t m = singleton_signs.size();
            const bool complete = m < 63 && sub_count == (std::size_t{1} << m) - 1;
            if (complete) agree = agree && B == subset_sum_closed_form(singleton_signs);
        }
        if (regime == Theorem::TH1 || has_cross || cert.cross == 0) {
            long long trace_final = 0;
            for (std::size_t i : active_records(records, regime)) trace_final += records[i].sign;
            agree = agree && trace_final == cert.S;
        }
        cert.brute_force_agrees = agree;
        if (!agree) cert.caveats.emplace_back("closed-form sums disagree with brute-force enumeration");
    }
    return cert;
}

}  // namespace fnir

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fnirenberg/critpoints.hpp"
#include "fnirenberg/interaction.hpp"

namespace fnir {

enum class Family { BetaCritical, SubCritical, Cross };
enum class Theorem { TH2, TH1, NotApplicable };

std::string_view family_name(Family f);
std::string_view theorem_name(Theorem t);

/// One critical point at infinity: an unordered set of distinct critical points.
struct TupleRecord {
    std::vector<std::size_t> members;  // sorted indices into the classified point list
    Family family = Family::SubCritical;
    int index_inf = 0;  // p - 1 + sum_j (n - itilde(y_j))
    int sign = 1;       // (-1)^index_inf
    std::optional<double> rho;
    // Cross records pair a BetaCritical record with a SubCritical one (indices into the record list).
    std::optional<std::size_t> beta_part;
    std::optional<std::size_t> sub_part;

    std::size_t p() const { return members.size(); }
};

struct CensusOptions {
    std::size_t max_p = 0;  // 0 = no cap
    bool force = false;     // allow more than 2^20 records
    bool include_cross = true;
};

struct Census {
    std::vector<TupleRecord> records;
    std::vector<std::vector<std::size_t>> degenerate;  // beta-critical subsets with rho ~ 0
    bool truncated = false;                            // max_p below a stratum size
};

/// Index at infinity of a set of points: p - 1 + sum (n - itilde).
int index_at_infinity(std::span<const ClassifiedPoint> points, std::span<const std::size_t> members, int n);

/// Enumerates the positive-rho subsets of the beta-critical stratum (from an A1
/// report), every subset of K+ minus that stratum, and their cross unions.
Census enumerate_families(std::span<const ClassifiedPoint> points, const A1Report& a1, int n,
                          const CensusOptions& opts = {});

/// TH2 when every beta lies in (1, n - 2 sigma], TH1 when every beta lies in
/// [n - 2 sigma, n), NotApplicable for mixed regimes. Points classified
/// beta-critical count as beta = n - 2 sigma. All-critical data selects TH2.
Theorem determine_regime(std::span<const ClassifiedPoint> points, int n, double sigma);

struct Certificate {
    Theorem theorem = Theorem::NotApplicable;
    long long A = 0;  // sum over the beta-critical family
    long long B = 0;  // sum over the sub-critical family (singletons only for TH1)
    long long cross = 0;
    long long S = 0;
    std::optional<bool> exists;  // S != 1; empty when not applicable
    bool brute_force_agrees = true;
    std::optional<long long> S_ordered;  // diagnostic: each p-subset weighted by p!
    std::vector<std::string> caveats;    // conditions that invalidate the verdict
};

/// Integer evaluation of the criterion. TH2: S = A + B - A B; TH1: S = (sum over
/// sub-critical singletons) + A. When `brute_force_limit` >= the point count the
/// factorized forms are re-derived by explicit double loops and compared.
Certificate evaluate_certificate(std::span<const TupleRecord> records, Theorem regime,
                                 std::size_t point_count = 0, std::size_t brute_force_limit = 12,
                                 bool ordered_tuples = false);

/// Records the active theorem counts, in canonical order (by p, then index, then members).
std::vector<std::size_t> active_records(std::span<const TupleRecord> records, Theorem regime);

/// Running Euler characteristic chi(J_b) = chi(J_a) + (-1)^{index} over the
/// active records in canonical order, starting from chi(empty) = 0.
std::vector<long long> euler_trace(std::span<const TupleRecord> records, Theorem regime);

/// Signed sum over all nonempty subsets of points with per-point signs s_y,
/// where a p-subset carries (-1)^{p-1} prod s_y. Equals 1 - prod_y (1 - s_y).
long long subset_sum_closed_form(std::span<const int> point_signs);

}  // namespace fnir

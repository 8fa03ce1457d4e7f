#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fnirenberg/expr.hpp"
#include "fnirenberg/geometry.hpp"

namespace fnir {

/// A critical point y of K with its flatness data: in the normal chart of
/// `frame`, K(x) = K(y) + sum_k b_k |x_k|^beta + (higher order).
struct CriticalPoint {
    SpherePoint y;
    TangentFrame frame;
    double K_val = 0.0;
    double beta = 0.0;
    Vector b;
    /// User-supplied data is compared exactly (up to rounding); fitted data uses beta_tol.
    bool exact = false;
    double fit_residual = 0.0;
    double grad_norm = 0.0;

    double b_sum() const { return b.sum(); }
};

struct Classification {
    bool in_K_plus = false;           // -sum b_k > 0
    bool in_K_beta_critical = false;  // beta == n - 2 sigma
    int itilde = 0;                   // #{k : b_k < 0}
};

struct ClassifiedPoint {
    CriticalPoint point;
    Classification cls;
};

struct SearchOptions {
    std::size_t n_starts = 500;
    double grad_tol = 1e-7;
    double dedup_tol = 1e-6;
    double fd_step = 1e-5;
    int max_iter = 100;
    int validation_factor = 10;  // positivity sample holds validation_factor * 4^n points
    std::uint64_t seed = 42;
};

struct SearchResult {
    std::vector<SpherePoint> points;
    std::size_t converged_starts = 0;
    std::vector<std::string> warnings;
};

/// Deterministic quasi-uniform sample of S^n: a Fibonacci spiral for n = 2 and
/// a Kronecker (generalized golden ratio) sequence pushed through Box-Muller otherwise.
std::vector<SpherePoint> quasi_uniform_points(int n, std::size_t count, std::uint64_t seed);

/// Multistart search for zeros of the spherical gradient of K, of any Morse index.
/// Each start runs Levenberg-Marquardt steps on |grad K|^2 with a finite-difference
/// Hessian; converged points are deduplicated in start order.
SearchResult find_critical_points(const Expression& K, int n, const SearchOptions& opts = {});

struct FlatnessFit {
    double beta = 0.0;
    Vector b;
    Vector axis_beta;
    double residual = 0.0;  // max_k |beta_k - beta|
};

/// Eight radii spaced geometrically between 1e-4 and 0.05.
std::vector<double> default_radii();

/// Per-axis log-log regression of |K(exp(t e_k)) - K(y)| against t.
/// The symmetric difference (K(+t) + K(-t))/2 - K(y) is used so odd remainder terms cancel.
FlatnessFit fit_flatness(const Expression& K, const TangentFrame& frame, std::span<const double> radii,
                         double consistency_tol = 0.05);

/// Detect-and-fit convenience: builds a CriticalPoint at y with frame normal_frame(y, seed).
CriticalPoint fitted_critical_point(const Expression& K, const SpherePoint& y, std::uint64_t frame_seed,
                                    std::span<const double> radii, double consistency_tol, double fd_step);

/// Throws InvalidInput if the flatness data violate K > 0, 1 < beta < n, b_k != 0 or |sum b| > bsum_tol.
void validate_critical_point(const CriticalPoint& cp, int n, double bsum_tol = 1e-9);

Classification classify(const CriticalPoint& cp, int n, double sigma, double beta_tol = 1e-3);

}  // namespace fnir

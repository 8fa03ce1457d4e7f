#pragma once

#include <functional>
#include <span>

namespace fnir {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimated absolute error
    int intervals = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-14;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature on [a, b]: the interval
/// with the largest error estimate is bisected until the total error meets
/// max(abs_tol, rel_tol |I|). Handles integrable endpoint singularities.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Integral over [a, +inf) via the map t = a + u / (1 - u), u in [0, 1).
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 const QuadOptions& opts = {});

/// Integral over the real line, split at the sorted interior `breaks` (kinks,
/// sign changes) so that every panel has a smooth integrand.
QuadResult integrate_real_line(const std::function<double(double)>& f, std::span<const double> breaks,
                               const QuadOptions& opts = {});

}  // namespace fnir

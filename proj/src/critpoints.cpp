#include "fnirenberg/critpoints.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fnirenberg/error.hpp"

namespace fnir {

namespace {

double frac(double x) { return x - std::floor(x); }

// Root of x^{d+1} = x + 1, the generalized golden ratio of a d-dimensional Kronecker sequence.
double golden_root(int d) {
    double x = 2.0;
    for (int i = 0; i < 60; ++i) x = std::pow(1.0 + x, 1.0 / (d + 1.0));
    return x;
}

struct Probe {
    SpherePoint x;
    double phi = 0.0;  // |grad K|^2
    Vector g;
    TangentFrame frame;
};

Probe probe(const Expression& K, const SpherePoint& x, double h) {
    Probe p;
    p.x = x;
    p.frame = normal_frame(x, 0);
    p.g = sphere_gradient(K, p.frame, h);
    p.phi = p.g.squaredNorm();
    return p;
}

// Levenberg-Marquardt on |grad K|^2; returns the final probe and whether it converged.
std::pair<Probe, bool> descend(const Expression& K, const SpherePoint& start, const SearchOptions& opts) {
    Probe cur = probe(K, start, opts.fd_step);
    double mu = 1e-6;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (std::sqrt(cur.phi) < opts.grad_tol) return {cur, true};
        const Matrix H = sphere_hessian(K, cur.frame);
        const int n = cur.frame.dim();
        bool moved = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const Matrix A = H.transpose() * H + mu * Matrix::Identity(n, n);
            Vector d = A.ldlt().solve(-H.transpose() * cur.g);
            const double len = d.norm();
            if (!std::isfinite(len)) {
                mu *= 10.0;
                continue;
            }
            if (len > 0.5) d *= 0.5 / len;
            Probe next = probe(K, exp_map(cur.frame, d), opts.fd_step);
            if (next.phi < cur.phi) {
                cur = std::move(next);
                mu = std::max(mu * 0.1, 1e-12);
                moved = true;
                break;
            }
            mu *= 10.0;
        }
        if (!moved) break;
    }
    return {cur, std::sqrt(cur.phi) < opts.grad_tol};
}

}  // namespace

std::vector<SpherePoint> quasi_uniform_points(int n, std::size_t count, std::uint64_t seed) {
    std::vector<SpherePoint> pts;
    pts.reserve(count);
    const double shift = frac(static_cast<double>(seed % 1000003) * 0.6180339887498949);
    if (n == 2) {
        const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (std::size_t i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(count);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden_angle * static_cast<double>(i) + 2.0 * std::numbers::pi * shift;
            Vector v(3);
            v << r * std::cos(phi), r * std::sin(phi), z;
            pts.emplace_back(std::move(v));
        }
        return pts;
    }
    const int dims = n + 1;
    const int pairs = (dims + 1) / 2;
    const int d = 2 * pairs;
    const double g = golden_root(d);
    std::vector<double> alpha(d);
    for (int j = 0; j < d; ++j) alpha[j] = std::pow(1.0 / g, j + 1.0);
    for (std::size_t i = 0; i < count; ++i) {
        Vector v(dims);
        for (int k = 0; k < pairs; ++k) {
            const double u1 = frac(0.5 + shift + (i + 1.0) * alpha[2 * k]);
            const double u2 = frac(0.5 + shift + (i + 1.0) * alpha[2 * k + 1]);
            const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
            v[2 * k] = rad * std::cos(2.0 * std::numbers::pi * u2);
            if (2 * k + 1 < dims) v[2 * k + 1] = rad * std::sin(2.0 * std::numbers::pi * u2);
        }
        if (v.norm() == 0.0) v[0] = 1.0;
        pts.emplace_back(std::move(v));
    }
    return pts;
}

SearchResult find_critical_points(const Expression& K, int n, const SearchOptions& opts) {
    if (K.max_variable() > n + 1)
        throw Error(ErrorKind::UnknownVariable, "K uses x" + std::to_string(K.max_variable()) +
                                                    " but the ambient dimension is " + std::to_string(n + 1));
    SearchResult result;

    // positivity and degeneracy screen on a quasi-uniform validation sample
    const auto sample_size = static_cast<std::size_t>(opts.validation_factor * std::pow(4.0, n));
    bool all_flat = true;
    for (const SpherePoint& p : quasi_uniform_points(n, sample_size, opts.seed + 1)) {
        const double k = eval_on_sphere(K, p);
        if (!(k > 0.0))
            throw Error(ErrorKind::KNotPositive, "K = " + std::to_string(k) + " at a validation sample point");
        if (all_flat && sphere_gradient(K, normal_frame(p, 0), opts.fd_step).norm() >= opts.grad_tol)
            all_flat = false;
    }
    if (all_flat)
        throw Error(ErrorKind::DegenerateK, "gradient identically below tolerance everywhere");

    for (const SpherePoint& start : quasi_uniform_points(n, opts.n_starts, opts.seed)) {
        auto [end, ok] = descend(K, start, opts);
        if (!ok) continue;
        ++result.converged_starts;
        const bool seen = std::any_of(result.points.begin(), result.points.end(), [&](const SpherePoint& q) {
            return geodesic_distance(q, end.x) <= opts.dedup_tol;
        });
        if (!seen) result.points.push_back(end.x);
    }
    if (result.converged_starts == 0)
        result.warnings.emplace_back("no multistart run converged to a critical point");
    return result;
}

std::vector<double> default_radii() {
    std::vector<double> r(8);
    const double lo = std::log(1e-4), hi = std::log(0.05);
    for (int i = 0; i < 8; ++i) r[i] = std::exp(lo + (hi - lo) * i / 7.0);
    r.front() = 1e-4;
    r.back() = 0.05;
    return r;
}

FlatnessFit fit_flatness(const Expression& K, const TangentFrame& frame, std::span<const double> radii,
                         double consistency_tol) {
    if (radii.size() < 6) throw Error(ErrorKind::InvalidInput, "flatness fit needs at least 6 radii");
    for (double t : radii)
        if (!(t >= 1e-4 && t <= 0.05)) throw Error(ErrorKind::InvalidInput, "fit radii must lie in [1e-4, 0.05]");
    const double k0 = eval_on_sphere(K, frame.base);
    if (!(k0 > 0.0)) throw Error(ErrorKind::KNotPositive, "K(y) must be positive");

    const int n = frame.dim();
    // below this the difference is dominated by rounding in K itself
    const double noise_floor = std::max(1e-13, 1e-10 * std::abs(k0));

    FlatnessFit fit;
    fit.b.resize(n);
    fit.axis_beta.resize(n);
    for (int k = 0; k < n; ++k) {
        std::vector<double> xs, ys;
        int positive = 0, negative = 0;
        bool any_signal = false;
        for (double t : radii) {
            Vector v = Vector::Zero(n);
            v[k] = t;
            const double plus = eval_on_sphere(K, exp_map(frame, v));
            const double minus = eval_on_sphere(K, exp_map(frame, -v));
            const double diff = 0.5 * (plus + minus) - k0;
            if (std::abs(diff) > 1e-13) any_signal = true;
            if (std::abs(diff) <= noise_floor) continue;
            (diff > 0 ? positive : negative)++;
            xs.push_back(std::log(t));
            ys.push_back(std::log(std::abs(diff)));
        }
        if (!any_signal || xs.size() < 3)
            throw Error(ErrorKind::AxisDegenerate,
                        "K is flat to rounding along axis " + std::to_string(k + 1) + " (b_k = 0)");
        if (positive != 0 && negative != 0)
            throw Error(ErrorKind::NotFlat, "K - K(y) changes sign along axis " + std::to_string(k + 1));

        const auto m = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double intercept = (sy - slope * sx) / m;
        fit.axis_beta[k] = slope;
        fit.b[k] = (negative ? -1.0 : 1.0) * std::exp(intercept);
    }
    fit.beta = fit.axis_beta.mean();
    fit.residual = (fit.axis_beta.array() - fit.beta).abs().maxCoeff();
    if (fit.residual > consistency_tol)
        throw Error(ErrorKind::NotFlat, "per-axis exponents disagree by " + std::to_string(fit.residual));
    return fit;
}

CriticalPoint fitted_critical_point(const Expression& K, const SpherePoint& y, std::uint64_t frame_seed,
                                    std::span<const double> radii, double consistency_tol, double fd_step) {
    CriticalPoint cp;
    cp.y = y;
    cp.frame = normal_frame(y, frame_seed);
    cp.K_val = eval_on_sphere(K, y);
    const FlatnessFit fit = fit_flatness(K, cp.frame, radii, consistency_tol);
    cp.beta = fit.beta;
    cp.b = fit.b;
    cp.fit_residual = fit.residual;
    cp.grad_norm = sphere_gradient(K, cp.frame, fd_step).norm();
    cp.exact = false;
    return cp;
}

void validate_critical_point(const CriticalPoint& cp, int n, double bsum_tol) {
    if (cp.y.dim() != n) throw Error(ErrorKind::DimensionMismatch, "critical point is not on S^" + std::to_string(n));
    if (cp.frame.dim() != n || cp.b.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "frame and b-vector must have n entries");
    if (!(cp.K_val > 0.0)) throw Error(ErrorKind::KNotPositive, "K(y) must be positive");
    if (!(cp.beta > 1.0 && cp.beta < n))
        throw Error(ErrorKind::InvalidInput, "flatness order beta must lie in (1, n)");
    for (int k = 0; k < n; ++k)
        if (cp.b[k] == 0.0 || !std::isfinite(cp.b[k]))
            throw Error(ErrorKind::InvalidInput, "b_" + std::to_string(k + 1) + " must be a nonzero real");
    if (!(std::abs(cp.b_sum()) > bsum_tol))
        throw Error(ErrorKind::InvalidInput, "sum of b_k must be nonzero");
}

Classification classify(const CriticalPoint& cp, int n, double sigma, double beta_tol) {
    Classification c;
    const double critical = n - 2.0 * sigma;
    // exact data is compared up to a few ulps of n - 2 sigma
    const double tol = cp.exact ? 1e-12 : beta_tol;
    c.in_K_beta_critical = std::abs(cp.beta - critical) <= tol * critical;
    c.in_K_plus = cp.b_sum() < 0.0;
    c.itilde = static_cast<int>((cp.b.array() < 0.0).count());
    return c;
}

}  // namespace fnir

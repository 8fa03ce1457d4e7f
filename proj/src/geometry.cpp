#include "fnirenberg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fnirenberg/error.hpp"

namespace fnir {

namespace {

void require_same_dim(const SpherePoint& a, const SpherePoint& b) {
    if (a.dim() != b.dim())
        throw Error(ErrorKind::DimensionMismatch,
                    "points of S^" + std::to_string(a.dim()) + " and S^" + std::to_string(b.dim()));
}

double clamped_dot(const SpherePoint& a, const SpherePoint& b) {
    require_same_dim(a, b);
    return std::clamp(a.coords().dot(b.coords()), -1.0, 1.0);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

SpherePoint::SpherePoint(Vector coords) : coords_(std::move(coords)) {
    if (coords_.size() < 3)
        throw Error(ErrorKind::InvalidInput, "sphere dimension must be at least 2");
    const double norm = coords_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw Error(ErrorKind::InvalidInput, "cannot normalize a zero or non-finite vector");
    coords_ /= norm;
}

SpherePoint SpherePoint::north_pole(int n) { return basis(n, n); }

SpherePoint SpherePoint::south_pole(int n) {
    Vector v = Vector::Zero(n + 1);
    v[n] = -1.0;
    return SpherePoint(std::move(v));
}

SpherePoint SpherePoint::basis(int n, int k) {
    Vector v = Vector::Zero(n + 1);
    v[k] = 1.0;
    return SpherePoint(std::move(v));
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
    return std::acos(clamped_dot(a, b));
}

double chordal_distance(const SpherePoint& a, const SpherePoint& b) {
    require_same_dim(a, b);
    return (a.coords() - b.coords()).norm();
}

double green_kernel(const SpherePoint& a, const SpherePoint& b, int n, double sigma,
                    double coincidence_tol) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw Error(ErrorKind::InvalidInput, "sigma must lie in (0, 1)");
    if (geodesic_distance(a, b) <= coincidence_tol)
        throw Error(ErrorKind::CoincidentPoints, "Green kernel is singular at coincident points");
    // 1 - cos d = |a - b|^2 / 2 is better conditioned than 1 - <a, b> near d = 0.
    const double one_minus_cos = 0.5 * (a.coords() - b.coords()).squaredNorm();
    return std::pow(one_minus_cos, -0.5 * (n - 2.0 * sigma));
}

SpherePoint stereographic(const Vector& x) {
    const double r2 = x.squaredNorm();
    Vector p(x.size() + 1);
    p.head(x.size()) = 2.0 * x / (1.0 + r2);
    p[x.size()] = (r2 - 1.0) / (r2 + 1.0);
    return SpherePoint(std::move(p));
}

Vector stereographic_inv(const SpherePoint& p) {
    const int n = p.dim();
    const double last = p[n];
    if (last >= 1.0 - 1e-12)
        throw Error(ErrorKind::NorthPole, "stereographic inverse is undefined at the north pole");
    return p.coords().head(n) / (1.0 - last);
}

TangentFrame normal_frame(const SpherePoint& y, std::uint64_t seed) {
    const int n = y.dim();
    const Vector& base = y.coords();

    std::vector<Vector> candidates;
    candidates.reserve(n + 1);
    if (seed == 0) {
        Eigen::Index drop = 0;
        base.cwiseAbs().maxCoeff(&drop);
        for (int k = 0; k <= n; ++k) {
            if (k == drop) continue;
            candidates.push_back(Vector::Unit(n + 1, k));
        }
    } else {
        std::mt19937_64 gen(seed);
        for (int k = 0; k < n + 4; ++k) {
            Vector v(n + 1);
            for (int j = 0; j <= n; ++j) v[j] = 2.0 * unit_uniform(gen) - 1.0;
            candidates.push_back(std::move(v));
        }
    }

    Matrix axes(n + 1, n);
    int filled = 0;
    for (const Vector& c : candidates) {
        if (filled == n) break;
        Vector v = c;
        // two passes of modified Gram-Schmidt
        for (int pass = 0; pass < 2; ++pass) {
            v -= base.dot(v) * base;
            for (int j = 0; j < filled; ++j) v -= axes.col(j).dot(v) * axes.col(j);
        }
        const double norm = v.norm();
        if (norm < 1e-3) continue;
        axes.col(filled++) = v / norm;
    }
    if (filled != n)
        throw Error(ErrorKind::InvalidInput, "could not complete a tangent frame");
    return TangentFrame{y, std::move(axes)};
}

TangentFrame frame_from_axes(const SpherePoint& base, const std::vector<Vector>& axes, double tol) {
    const int n = base.dim();
    if (static_cast<int>(axes.size()) != n)
        throw Error(ErrorKind::DimensionMismatch, "frame needs exactly n axes");
    Matrix m(n + 1, n);
    for (int k = 0; k < n; ++k) {
        if (axes[k].size() != n + 1)
            throw Error(ErrorKind::DimensionMismatch, "frame axis has wrong length");
        Vector v = axes[k];
        if (std::abs(v.norm() - 1.0) > tol || std::abs(v.dot(base.coords())) > tol)
            throw Error(ErrorKind::InvalidInput, "frame axis " + std::to_string(k) +
                                                     " is not a unit tangent vector");
        for (int j = 0; j < k; ++j) {
            if (std::abs(v.dot(m.col(j))) > tol)
                throw Error(ErrorKind::InvalidInput, "frame axes are not orthogonal");
        }
        v -= base.coords().dot(v) * base.coords();
        for (int j = 0; j < k; ++j) v -= m.col(j).dot(v) * m.col(j);
        m.col(k) = v.normalized();
    }
    return TangentFrame{base, std::move(m)};
}

SpherePoint exp_map(const TangentFrame& frame, const Vector& v) {
    if (v.size() != frame.dim())
        throw Error(ErrorKind::DimensionMismatch, "tangent vector has wrong length");
    const double r = v.norm();
    if (r >= std::numbers::pi)
        throw Error(ErrorKind::ChartOverflow, "normal coordinate radius must be below pi");
    if (r == 0.0) return frame.base;
    const Vector dir = frame.axes * v / r;
    return SpherePoint(std::cos(r) * frame.base.coords() + std::sin(r) * dir);
}

Vector log_map(const TangentFrame& frame, const SpherePoint& p) {
    const Vector coords = frame.axes.transpose() * p.coords();
    const double s = coords.norm();
    if (s == 0.0) return Vector::Zero(frame.dim());
    const double theta = std::atan2(s, frame.base.coords().dot(p.coords()));
    return coords * (theta / s);
}

Vector project_tangent(const SpherePoint& p, const Vector& v) {
    return v - p.coords().dot(v) * p.coords();
}

SpherePoint exp_ambient(const SpherePoint& p, const Vector& tangent) {
    const Vector t = project_tangent(p, tangent);
    const double r = t.norm();
    if (r == 0.0) return p;
    if (r >= std::numbers::pi)
        throw Error(ErrorKind::ChartOverflow, "tangent step must be shorter than pi");
    return SpherePoint(std::cos(r) * p.coords() + std::sin(r) * t / r);
}

}  // namespace fnir

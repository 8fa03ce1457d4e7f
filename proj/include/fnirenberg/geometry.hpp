#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace fnir {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of the unit sphere S^n, stored by its n+1 ambient coordinates.
/// The coordinates are renormalized on construction.
class SpherePoint {
public:
    SpherePoint() = default;
    explicit SpherePoint(Vector coords);

    /// The sphere dimension n (ambient dimension minus one).
    int dim() const noexcept { return static_cast<int>(coords_.size()) - 1; }
    const Vector& coords() const noexcept { return coords_; }
    double operator[](Eigen::Index i) const { return coords_[i]; }

    static SpherePoint north_pole(int n);
    static SpherePoint south_pole(int n);
    /// The ambient basis vector e_{k+1} (zero-based k) viewed as a sphere point.
    static SpherePoint basis(int n, int k);

    bool operator==(const SpherePoint& other) const { return coords_ == other.coords_; }

private:
    Vector coords_;
};

/// Orthonormal basis of the tangent space at `base`; axes are the columns of `axes`.
struct TangentFrame {
    SpherePoint base;
    Matrix axes;  // (n+1) x n

    int dim() const noexcept { return base.dim(); }
    Vector axis(int k) const { return axes.col(k); }
};

/// Great-circle distance in [0, pi]; the inner product is clamped to [-1, 1].
double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// Chordal (ambient Euclidean) distance |a - b|.
double chordal_distance(const SpherePoint& a, const SpherePoint& b);

/// (1 - cos d(a, b))^{-(n - 2 sigma)/2}. Singular when the points coincide.
double green_kernel(const SpherePoint& a, const SpherePoint& b, int n, double sigma,
                    double coincidence_tol = 1e-9);

/// F(x) = (2x / (1 + |x|^2), (|x|^2 - 1) / (|x|^2 + 1)).
SpherePoint stereographic(const Vector& x);

/// Inverse of `stereographic`; undefined at the north pole.
Vector stereographic_inv(const SpherePoint& p);

/// Deterministic orthonormal tangent frame at y.
///
/// Seed 0 completes y with the ambient basis vectors in index order, dropping
/// the one most aligned with y, so the north pole gets the axes e_1..e_n.
/// Other seeds complete with pseudo-random vectors drawn from a seeded
/// mt19937_64 stream.
TangentFrame normal_frame(const SpherePoint& y, std::uint64_t seed);

/// Builds a frame from explicit axes, re-orthonormalizing them against the base.
/// Throws InvalidInput when the axes are not close to an orthonormal tangent set.
TangentFrame frame_from_axes(const SpherePoint& base, const std::vector<Vector>& axes,
                             double tol = 1e-6);

/// Riemannian exponential map: cos|v| base + sin|v| (sum v_k axis_k)/|v|, for |v| < pi.
SpherePoint exp_map(const TangentFrame& frame, const Vector& v);

/// Normal coordinates of p in the chart of `frame` (inverse of exp_map away from the cut locus).
Vector log_map(const TangentFrame& frame, const SpherePoint& p);

/// Exponential map at p along an ambient tangent vector (projected onto T_p S^n first).
SpherePoint exp_ambient(const SpherePoint& p, const Vector& tangent);

/// Orthogonal projection of an ambient vector onto the tangent space at p.
Vector project_tangent(const SpherePoint& p, const Vector& v);

}  // namespace fnir

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "fnirenberg/constants.hpp"
#include "fnirenberg/critpoints.hpp"
#include "fnirenberg/geometry.hpp"

namespace fnir {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Only the lower triangle is read.
Vector jacobi_eigenvalues(Matrix a, double tol = 1e-15, int max_sweeps = 100);

enum class SpectralSign { Positive, Negative, Degenerate };

std::string_view sign_name(SpectralSign s);

/// The symmetric interaction matrix of a tuple of points in the beta = n - 2 sigma stratum:
///
///   m_ii = (n-2s)/n * c1~ * (-sum_k b_k(y_i)) / K(y_i)^{n/(2s)}
///   m_ij = -2^{(n-2s)/2} c1 G(y_i, y_j) / [K(y_i) K(y_j)]^{(n-2s)/(4s)}
struct InteractionMatrix {
    std::vector<std::size_t> members;  // indices into the point list
    Matrix entries;
    double rho = 0.0;         // least eigenvalue
    double rho_margin = 0.0;  // |rho| / ||M||_F

    std::size_t p() const { return members.size(); }
};

/// Builds M for the given members of `points`. Points must be pairwise distinct
/// (geodesic distance > 1e-6) and classified beta-critical.
InteractionMatrix build_matrix(std::span<const ClassifiedPoint> points, std::span<const std::size_t> members,
                               const Constants& consts);

/// Convenience overload over every point in `points`.
InteractionMatrix build_matrix(std::span<const ClassifiedPoint> points, const Constants& consts);

SpectralSign spectral_sign(const InteractionMatrix& m, double degeneracy_rel_tol);

struct A1Entry {
    InteractionMatrix matrix;
    SpectralSign sign = SpectralSign::Positive;
};

struct A1Report {
    std::vector<std::size_t> stratum;  // indices of beta-critical points
    std::vector<A1Entry> tuples;       // every subset of size 1..max_p, in canonical order
    bool holds = true;                 // no degenerate subset
    bool truncated = false;            // max_p < |stratum|
};

/// Least eigenvalue of every nonempty subset (size <= max_p, 0 = no cap) of the
/// beta-critical points. Subsets are enumerated by size, then lexicographically.
A1Report check_A1(std::span<const ClassifiedPoint> points, const Constants& consts, std::size_t max_p = 0,
                  double degeneracy_rel_tol = 1e-9);

/// All k-subsets of {0..m-1} in lexicographic order.
std::vector<std::vector<std::size_t>> combinations(std::size_t m, std::size_t k);

}  // namespace fnir

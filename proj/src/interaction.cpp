#include "fnirenberg/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fnirenberg/error.hpp"

namespace fnir {

Vector jacobi_eigenvalues(Matrix a, double tol, int max_sweeps) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorKind::DimensionMismatch, "eigenvalues need a square matrix");
    a = a.selfadjointView<Eigen::Lower>();
    const double scale = std::max(a.norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < i; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= tol * scale) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // rotation angle that annihilates a(p, q)
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = a(q, p) = 0.0;
            }
        }
    }
    Vector eig = a.diagonal();
    std::sort(eig.begin(), eig.end());
    return eig;
}

std::string_view sign_name(SpectralSign s) {
    switch (s) {
        case SpectralSign::Positive: return "positive";
        case SpectralSign::Negative: return "negative";
        case SpectralSign::Degenerate: return "degenerate";
    }
    return "?";
}

InteractionMatrix build_matrix(std::span<const ClassifiedPoint> points, std::span<const std::size_t> members,
                               const Constants& consts) {
    const int n = consts.n;
    const double sigma = consts.sigma;
    const double ns = n - 2.0 * sigma;
    const auto p = static_cast<Eigen::Index>(members.size());
    if (p == 0) throw Error(ErrorKind::InvalidInput, "interaction matrix needs at least one point");

    for (std::size_t idx : members) {
        if (idx >= points.size()) throw Error(ErrorKind::InvalidInput, "tuple member out of range");
        if (!points[idx].cls.in_K_beta_critical)
            throw Error(ErrorKind::WrongStratum,
                        "point " + std::to_string(idx) + " does not have flatness order n - 2 sigma");
    }

    InteractionMatrix m;
    m.members.assign(members.begin(), members.end());
    m.entries.resize(p, p);
    const double off_scale = std::pow(2.0, 0.5 * ns) * consts.c1;
    for (Eigen::Index i = 0; i < p; ++i) {
        const CriticalPoint& yi = points[members[i]].point;
        m.entries(i, i) = ns / n * consts.c1_tilde * (-yi.b_sum()) / std::pow(yi.K_val, n / (2.0 * sigma));
        for (Eigen::Index j = 0; j < i; ++j) {
            const CriticalPoint& yj = points[members[j]].point;
            if (geodesic_distance(yi.y, yj.y) <= 1e-6)
                throw Error(ErrorKind::CoincidentPoints, "tuple members " + std::to_string(members[j]) + " and " +
                                                             std::to_string(members[i]) + " coincide");
            const double g = green_kernel(yi.y, yj.y, n, sigma);
            const double value = -off_scale * g / std::pow(yi.K_val * yj.K_val, ns / (4.0 * sigma));
            m.entries(i, j) = value;
            m.entries(j, i) = value;
        }
    }
    m.rho = jacobi_eigenvalues(m.entries)[0];
    m.rho_margin = std::abs(m.rho) / m.entries.norm();
    return m;
}

InteractionMatrix build_matrix(std::span<const ClassifiedPoint> points, const Constants& consts) {
    std::vector<std::size_t> all(points.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return build_matrix(points, all, consts);
}

SpectralSign spectral_sign(const InteractionMatrix& m, double degeneracy_rel_tol) {
    if (m.rho_margin <= degeneracy_rel_tol) return SpectralSign::Degenerate;
    return m.rho > 0.0 ? SpectralSign::Positive : SpectralSign::Negative;
}

std::vector<std::vector<std::size_t>> combinations(std::size_t m, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k == 0 || k > m) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    for (;;) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == m - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

A1Report check_A1(std::span<const ClassifiedPoint> points, const Constants& consts, std::size_t max_p,
                  double degeneracy_rel_tol) {
    A1Report report;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].cls.in_K_beta_critical) report.stratum.push_back(i);
    const std::size_t m = report.stratum.size();
    const std::size_t cap = max_p == 0 ? m : std::min(max_p, m);
    report.truncated = cap < m;

    for (std::size_t size = 1; size <= cap; ++size) {
        for (const auto& combo : combinations(m, size)) {
            std::vector<std::size_t> members(size);
            for (std::size_t i = 0; i < size; ++i) members[i] = report.stratum[combo[i]];
            A1Entry entry{build_matrix(points, members, consts), SpectralSign::Positive};
            entry.sign = spectral_sign(entry.matrix, degeneracy_rel_tol);
            if (entry.sign == SpectralSign::Degenerate) report.holds = false;
            report.tuples.push_back(std::move(entry));
        }
    }
    return report;
}

}  // namespace fnir

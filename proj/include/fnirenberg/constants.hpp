#pragma once

#include <string_view>

namespace fnir {

/// Lanczos approximation (g = 7, 9 terms) of the Gamma function; ~15 significant digits.
double lanczos_gamma(double x);

double beta_function(double a, double b);

/// Surface area of the unit sphere S^{m-1} in R^m: 2 pi^{m/2} / Gamma(m/2).
double unit_sphere_area(int m);

/// A value obtained by two independent routes.
struct CheckedIntegral {
    double closed_form = 0.0;
    double quadrature = 0.0;
    double relative_gap() const;
};

/// Int_{R^n} (1 + |x|^2)^{-p} dx, closed form. Requires p > n/2.
double radial_integral(int n, double p);
/// Same integral by adaptive quadrature after the substitution r = tan(theta).
double radial_integral_quadrature(int n, double p);
CheckedIntegral radial_integral_checked(int n, double p);

/// Int_{R^n} |x_1|^alpha (1 + |x|^2)^{-p} dx, closed form. Requires alpha >= 0, p > (n + alpha)/2.
double moment_integral(int n, double alpha, double p);
/// Same integral by quadrature: the transverse R^{n-1} factor and the |x_1| factor separately.
double moment_integral_quadrature(int n, double alpha, double p);
CheckedIntegral moment_integral_checked(int n, double alpha, double p);

/// Exponent of |x_1| in the diagonal constant: n-2 as printed in the problem
/// statement, or n-2sigma as it appears in the matrix derivation.
enum class C1TildeMode { PaperHeader, ProofStep };

std::string_view mode_name(C1TildeMode mode);
C1TildeMode parse_mode(std::string_view name);

struct Constants {
    int n = 0;
    double sigma = 0.0;
    double c0 = 1.0;
    C1TildeMode mode = C1TildeMode::ProofStep;

    double c1 = 0.0;
    double c1_tilde = 0.0;  // the value selected by `mode`
    double c1_tilde_paper_header = 0.0;
    double c1_tilde_proof_step = 0.0;
    double c2 = 0.0;
    double c5 = 0.0;
    double c_n_sigma = 0.0;  // Gamma(n/2 + sigma) / Gamma(n/2 - sigma)

    /// Largest relative gap between closed form and quadrature over all assembled constants.
    double max_quadrature_gap = 0.0;

    /// c0^{2n/(n-2sigma)}, the bubble normalization factor.
    double c0_power() const;
    /// c0^{2n/(n-2sigma)} Int |x_1|^beta (1+|x|^2)^{-n} dx.
    double c3(double beta) const;
};

/// Requires n >= 2, 0 < sigma < 1, c0 > 0.
Constants build_constants(int n, double sigma, double c0 = 1.0, C1TildeMode mode = C1TildeMode::ProofStep);

}  // namespace fnir

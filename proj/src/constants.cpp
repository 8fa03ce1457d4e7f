#include "fnirenberg/constants.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fnirenberg/error.hpp"
#include "fnirenberg/quadrature.hpp"

namespace fnir {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

constexpr QuadOptions kConstantQuad{1e-15, 1e-13, 8000};

// Int_0^{pi/4} sin^a cos^b d(theta) with theta = u^k, k chosen so that the
// integrand stays bounded at u = 0 when a < 0.
QuadResult trig_power_half(double a, double b) {
    const double k = a < 0.0 ? std::ceil(1.0 / (a + 1.0)) : 1.0;
    const double top = std::pow(0.25 * std::numbers::pi, 1.0 / k);
    return integrate(
        [a, b, k](double u) {
            const double t = std::pow(u, k);
            return k * std::pow(u, k - 1.0) * std::pow(std::sin(t), a) * std::pow(std::cos(t), b);
        },
        0.0, top, kConstantQuad);
}

// Int_0^{pi/2} sin^a cos^b d(theta) = B((a+1)/2, (b+1)/2) / 2, computed numerically.
// The upper half is reflected so both endpoint singularities sit at 0.
double trig_power_quadrature(double a, double b) {
    const QuadResult lo = trig_power_half(a, b), hi = trig_power_half(b, a);
    if (!lo.converged || !hi.converged)
        throw Error(ErrorKind::IntegralFailure, "trigonometric moment did not converge (error estimate " +
                                                    std::to_string(lo.error + hi.error) + ")");
    return lo.value + hi.value;
}

void require_radial(int n, double p) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    if (!(p > 0.5 * n))
        throw Error(ErrorKind::DivergentIntegral,
                    "Int (1+|x|^2)^{-p} over R^" + std::to_string(n) + " needs p > n/2");
}

void require_moment(int n, double alpha, double p) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "dimension must be positive");
    if (!(alpha >= 0.0)) throw Error(ErrorKind::InvalidInput, "moment exponent must be non-negative");
    if (!(p > 0.5 * (n + alpha)))
        throw Error(ErrorKind::DivergentIntegral, "moment integral needs p > (n + alpha)/2");
}

}  // namespace

double lanczos_gamma(double x) {
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    x -= 1.0;
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (x + static_cast<double>(i));
    const double t = x + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double beta_function(double a, double b) {
    return lanczos_gamma(a) * lanczos_gamma(b) / lanczos_gamma(a + b);
}

double unit_sphere_area(int m) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / lanczos_gamma(0.5 * m);
}

double CheckedIntegral::relative_gap() const {
    return std::abs(closed_form - quadrature) / std::abs(closed_form);
}

double radial_integral(int n, double p) {
    require_radial(n, p);
    return unit_sphere_area(n) * 0.5 * beta_function(0.5 * n, p - 0.5 * n);
}

double radial_integral_quadrature(int n, double p) {
    require_radial(n, p);
    return unit_sphere_area(n) * trig_power_quadrature(n - 1.0, 2.0 * p - n - 1.0);
}

CheckedIntegral radial_integral_checked(int n, double p) {
    return {radial_integral(n, p), radial_integral_quadrature(n, p)};
}

double moment_integral(int n, double alpha, double p) {
    require_moment(n, alpha, p);
    // angular factor Int_{S^{n-1}} |w_1|^alpha dw
    const double angular = 2.0 * std::pow(std::numbers::pi, 0.5 * (n - 1)) * lanczos_gamma(0.5 * (alpha + 1.0)) /
                           lanczos_gamma(0.5 * (n + alpha));
    return angular * 0.5 * beta_function(0.5 * (n + alpha), p - 0.5 * (n + alpha));
}

double moment_integral_quadrature(int n, double alpha, double p) {
    require_moment(n, alpha, p);
    // Integrating out x' in R^{n-1} leaves (1 + x_1^2)^{-(p - (n-1)/2)} times a radial factor.
    const double transverse = n == 1 ? 1.0 : radial_integral_quadrature(n - 1, p);
    const double q = p - 0.5 * (n - 1);
    return transverse * 2.0 * trig_power_quadrature(alpha, 2.0 * q - 2.0 - alpha);
}

CheckedIntegral moment_integral_checked(int n, double alpha, double p) {
    return {moment_integral(n, alpha, p), moment_integral_quadrature(n, alpha, p)};
}

std::string_view mode_name(C1TildeMode mode) {
    return mode == C1TildeMode::PaperHeader ? "paper-header" : "proof-step";
}

C1TildeMode parse_mode(std::string_view name) {
    if (name == "paper-header") return C1TildeMode::PaperHeader;
    if (name == "proof-step") return C1TildeMode::ProofStep;
    throw Error(ErrorKind::InvalidInput, "unknown c1tilde mode '" + std::string(name) + "'");
}

double Constants::c0_power() const { return std::pow(c0, 2.0 * n / (n - 2.0 * sigma)); }

double Constants::c3(double beta) const { return c0_power() * moment_integral(n, beta, n); }

Constants build_constants(int n, double sigma, double c0, C1TildeMode mode) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "n must be at least 2");
    if (!(sigma > 0.0 && sigma < 1.0)) throw Error(ErrorKind::InvalidInput, "sigma must lie in (0, 1)");
    if (!(c0 > 0.0)) throw Error(ErrorKind::InvalidInput, "c0 must be positive");

    Constants c;
    c.n = n;
    c.sigma = sigma;
    c.c0 = c0;
    c.mode = mode;

    double gap = 0.0;
    auto take = [&gap](const CheckedIntegral& v) {
        gap = std::max(gap, v.relative_gap());
        return v.closed_form;
    };
    c.c1 = take(radial_integral_checked(n, 0.5 * (n + 2.0 * sigma)));
    c.c1_tilde_paper_header = take(moment_integral_checked(n, n - 2.0, n));
    c.c1_tilde_proof_step = take(moment_integral_checked(n, n - 2.0 * sigma, n));
    c.c1_tilde = mode == C1TildeMode::PaperHeader ? c.c1_tilde_paper_header : c.c1_tilde_proof_step;
    c.c2 = c.c0_power() * c.c1;
    c.c5 = take(radial_integral_checked(n, n));
    c.c_n_sigma = lanczos_gamma(0.5 * n + sigma) / lanczos_gamma(0.5 * n - sigma);
    c.max_quadrature_gap = gap;
    return c;
}

}  // namespace fnir

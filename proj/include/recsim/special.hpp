#pragma once

#include <cstdint>

// Scalar special functions used by the divergence and coding machinery.
// Everything here is deterministic and allocation-free.

namespace recsim::special {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kLbE = 1.4426950408889634073599246810;  // 1/ln 2
inline constexpr double kLn2 = 0.69314718055994530941723212146;

// Standard normal CDF, survival function and density.
double normal_cdf(double z);
double normal_sf(double z);
double normal_pdf(double z);

// Inverse CDF of the standard normal. Rational initial guess refined with
// one Halley step against erfc, good to ~1 ulp over (0, 1).
double normal_quantile(double p);

// x such that normal_sf(x) = s. Stable for s down to ~1e-300.
double normal_quantile_upper(double s);

// Principal branch of the Lambert W function, w * e^w = x, x >= -1/e.
// Halley iteration, ~1e-15 relative.
double lambert_w0(double x);

// Digamma via the ascending recurrence to x >= 6 plus the asymptotic series.
double digamma(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Central chi-square CDF / survival with k degrees of freedom.
double chi2_cdf(double x, double k);
double chi2_sf(double x, double k);

// Noncentral chi-square CDF, Poisson mixture of central terms summed
// outward from the modal weight until the residual mass is below 1e-14.
double ncx2_cdf(double x, double k, double lambda);

// Riemann zeta(alpha) for alpha > 1 (Euler-Maclaurin).
double riemann_zeta(double alpha);

// Sum_{k=1}^{n} k^(-alpha). Direct for small n, zeta minus tail otherwise.
double zeta_partial_sum(double alpha, std::uint64_t n);

// Survival function of the Kolmogorov distribution.
double kolmogorov_sf(double x);

}  // namespace recsim::special

#include "recsim/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace recsim::special {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488016887242;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_sf(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

namespace {

// Acklam's rational approximation for the normal quantile (~1e-9), used as
// the seed for a Halley refinement against erfc.
double acklam(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double halley_refine(double x, double p) {
  // e = F(x) - p, u = e / pdf(x), Halley: x -= u / (1 + x u / 2)
  double e = normal_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw std::domain_error("normal_quantile: p outside [0, 1]");
  }
  if (p < 1e-280) return -normal_quantile_upper(p);
  if (p > 1.0 - 1e-16) return normal_quantile_upper(1.0 - p);
  double x = acklam(p);
  x = halley_refine(x, p);
  x = halley_refine(x, p);
  return x;
}

double normal_quantile_upper(double s) {
  if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
  if (s >= 1.0) return -normal_quantile_upper(1.0 - s > 0 ? 1.0 - s : 1e-300);
  if (s > 1e-280) {
    double x = (s >= 0.02425) ? acklam(1.0 - s) : -acklam(s);
    // Newton on ln sf(x) = ln s; d/dx ln sf = -pdf/sf.
    for (int it = 0; it < 3; ++it) {
      double sf = normal_sf(x);
      if (sf <= 0.0) break;
      x += (std::log(sf) - std::log(s)) * sf / normal_pdf(x);
    }
    return x;
  }
  // Deep tail: fixed point of x = sqrt(-2 ln(s * sqrt(2pi) * x)).
  double ls = std::log(s);
  double x = std::sqrt(-2.0 * ls);
  for (int it = 0; it < 40; ++it) {
    double nx = std::sqrt(-2.0 * (ls + std::log(kSqrt2Pi * x) + std::log1p(-1.0 / (x * x))));
    if (std::abs(nx - x) < 1e-15 * x) {
      x = nx;
      break;
    }
    x = nx;
  }
  return x;
}

double lambert_w0(double x) {
  const double em1 = -0.36787944117144232159553;  // -1/e
  if (x < em1) {
    if (x > em1 * (1.0 + 4e-16)) x = em1;  // tolerate rounding at the branch point
    else throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  double w;
  if (x < -0.25) {
    double p = std::sqrt(2.0 * (std::exp(1.0) * x + 1.0));
    w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  } else if (x < 3.0) {
    w = x * (1.0 - x + 1.5 * x * x) / (1.0 + 0.5 * x);
    if (w <= -1.0) w = -0.9;
  } else {
    double lx = std::log(x);
    w = lx - std::log(lx);
  }
  for (int it = 0; it < 60; ++it) {
    double ew = std::exp(w);
    double f = w * ew - x;
    double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
    double dw = f / denom;
    w -= dw;
    if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double digamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  // psi(x) ~ ln x - 1/(2x) - sum B_{2n} / (2n x^{2n})
  double series = std::log(x) - 0.5 * inv -
                  inv2 * (1.0 / 12.0 -
                          inv2 * (1.0 / 120.0 -
                                  inv2 * (1.0 / 252.0 -
                                          inv2 * (1.0 / 240.0 -
                                                  inv2 * (1.0 / 132.0 -
                                                          inv2 * (691.0 / 32760.0 -
                                                                  inv2 * (1.0 / 12.0)))))));
  return acc + series;
}

namespace {

double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_p: bad arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

double chi2_cdf(double x, double k) { return x <= 0.0 ? 0.0 : gamma_p(0.5 * k, 0.5 * x); }

double chi2_sf(double x, double k) { return x <= 0.0 ? 1.0 : gamma_q(0.5 * k, 0.5 * x); }

double ncx2_cdf(double x, double k, double lambda) {
  if (x <= 0.0) return 0.0;
  if (lambda < 0.0) throw std::domain_error("ncx2_cdf: negative noncentrality");
  if (lambda == 0.0) return chi2_cdf(x, k);
  const double half = 0.5 * lambda;
  // Sum Poisson(half)-weighted central terms outward from the modal index.
  const std::int64_t j0 = static_cast<std::int64_t>(half);
  double wj0 = std::exp(-half + j0 * std::log(half) - std::lgamma(j0 + 1.0));
  double sum = wj0 * chi2_cdf(x, k + 2.0 * j0);
  double mass = wj0;
  double wup = wj0, wdn = wj0;
  for (std::int64_t step = 1; step < 20000 && mass < 1.0 - 1e-14; ++step) {
    std::int64_t ju = j0 + step;
    wup *= half / static_cast<double>(ju);
    sum += wup * chi2_cdf(x, k + 2.0 * ju);
    mass += wup;
    std::int64_t jd = j0 - step;
    if (jd >= 0) {
      wdn *= static_cast<double>(jd + 1) / half;
      sum += wdn * chi2_cdf(x, k + 2.0 * jd);
      mass += wdn;
    }
  }
  return sum < 0.0 ? 0.0 : (sum > 1.0 ? 1.0 : sum);
}

double riemann_zeta(double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("riemann_zeta: requires alpha > 1");
  const int n = 256;
  double sum = 0.0;
  for (int k = n - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -alpha);
  // Euler-Maclaurin tail from N = n.
  double N = n;
  double fN = std::pow(N, -alpha);
  double tail = N * fN / (alpha - 1.0) + 0.5 * fN + alpha * fN / N / 12.0 -
                alpha * (alpha + 1.0) * (alpha + 2.0) * fN / (N * N * N) / 720.0;
  return sum + tail;
}

double zeta_partial_sum(double alpha, std::uint64_t n) {
  if (n == 0) return 0.0;
  if (n <= 4096) {
    double sum = 0.0;
    for (std::uint64_t k = n; k >= 1; --k) sum += std::pow(static_cast<double>(k), -alpha);
    return sum;
  }
  // zeta(alpha) minus the Euler-Maclaurin tail from N = n + 1.
  double N = static_cast<double>(n + 1);
  double fN = std::pow(N, -alpha);
  double tail = N * fN / (alpha - 1.0) + 0.5 * fN + alpha * fN / N / 12.0 -
                alpha * (alpha + 1.0) * (alpha + 2.0) * fN / (N * N * N) / 720.0;
  return riemann_zeta(alpha) - tail;
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  double v = 2.0 * sum;
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

}  // namespace recsim::special

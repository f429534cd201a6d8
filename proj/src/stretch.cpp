#include "recsim/stretch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace recsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSlopeFloor = 1e-14;  // stop once the survival slope is this small

double hermite(double t0, double t1, double h0, double h1, double d0, double d1, double tt) {
  double dt = t1 - t0;
  if (dt <= 0.0) return h0;
  double s = (tt - t0) / dt;
  double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * h0 + (s3 - 2 * s2 + s) * dt * d0 +
         (-2 * s3 + 3 * s2) * h1 + (s3 - s2) * dt * d1;
}

double hermite_deriv(double t0, double t1, double h0, double h1, double d0, double d1,
                     double tt) {
  double dt = t1 - t0;
  if (dt <= 0.0) return d0;
  double s = (tt - t0) / dt;
  double s2 = s * s;
  return ((6 * s2 - 6 * s) * h0 + (3 * s2 - 4 * s + 1) * dt * d0 +
          (-6 * s2 + 6 * s) * h1 + (3 * s2 - 2 * s) * dt * d1) / dt;
}

}  // namespace

double StretchFunction::sha(double time) const {
  if (time <= 0.0) return 0.0;
  if (t.empty()) throw std::runtime_error("stretch: empty table");
  if (time >= t.back()) {
    if (complete) return h_max;
    throw std::runtime_error("stretch: t_max too small");
  }
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t k = static_cast<std::size_t>(it - t.begin());
  return hermite(t[k - 1], t[k], h[k - 1], h[k], hp[k - 1], hp[k], time);
}

double StretchFunction::sha_prime(double time) const {
  if (time <= 0.0) return 1.0;
  if (t.empty()) throw std::runtime_error("stretch: empty table");
  if (time >= t.back()) {
    if (complete) return 0.0;
    throw std::runtime_error("stretch: t_max too small");
  }
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t k = static_cast<std::size_t>(it - t.begin());
  double d = hermite_deriv(t[k - 1], t[k], h[k - 1], h[k], hp[k - 1], hp[k], time);
  return d < 0.0 ? 0.0 : (d > 1.0 ? 1.0 : d);
}

double StretchFunction::sigma(double height) const {
  if (height <= 0.0) return 0.0;
  if (t.empty()) throw std::runtime_error("stretch: empty table");
  if (height >= h_max) {
    if (complete) return kInf;
    throw std::runtime_error("stretch: t_max too small");
  }
  auto it = std::upper_bound(h.begin(), h.end(), height);
  std::size_t k = static_cast<std::size_t>(it - h.begin());
  if (k == 0) return 0.0;
  if (k >= h.size()) k = h.size() - 1;
  // Newton on the Hermite segment, seeded by linear inversion.
  double t0 = t[k - 1], t1 = t[k];
  double frac = (height - h[k - 1]) / std::max(h[k] - h[k - 1], 1e-300);
  double tt = t0 + frac * (t1 - t0);
  for (int i = 0; i < 30; ++i) {
    double f = hermite(t0, t1, h[k - 1], h[k], hp[k - 1], hp[k], tt) - height;
    double d = hermite_deriv(t0, t1, h[k - 1], h[k], hp[k - 1], hp[k], tt);
    if (d <= 0.0) break;
    double step = f / d;
    tt -= step;
    if (tt < t0) tt = t0;
    if (tt > t1) tt = t1;
    if (std::abs(step) < 1e-14 * (1.0 + tt)) break;
  }
  return tt;
}

StretchFunction solve_stretch(const TargetProposalPair&, const WidthFunction& width,
                              double t_max, double ode_tol) {
  StretchFunction out;
  auto f = [&width](double height) { return width.survival(height); };

  double tt = 0.0, hh = 0.0, slope = f(0.0);
  // sha'(0) = 1 by the ODE's initial condition; widths give wq(0)-0 = 1.
  out.t.push_back(0.0);
  out.h.push_back(0.0);
  out.hp.push_back(slope);

  double dt = 1e-4;
  const int kMaxKnots = 400000;
  // Cash-Karp 4(5) embedded pair.
  static const double b21 = 1.0 / 5.0;
  static const double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static const double b41 = 3.0 / 10.0, b42 = -9.0 / 10.0, b43 = 6.0 / 5.0;
  static const double b51 = -11.0 / 54.0, b52 = 5.0 / 2.0, b53 = -70.0 / 27.0,
                      b54 = 35.0 / 27.0;
  static const double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0, b63 = 575.0 / 13824.0,
                      b64 = 44275.0 / 110592.0, b65 = 253.0 / 4096.0;
  static const double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0, c4 = 125.0 / 594.0,
                      c6 = 512.0 / 1771.0;
  static const double d1 = 2825.0 / 27648.0, d3 = 18575.0 / 48384.0,
                      d4 = 13525.0 / 55296.0, d5 = 277.0 / 14336.0, d6 = 1.0 / 4.0;

  while (tt < t_max && static_cast<int>(out.t.size()) < kMaxKnots) {
    double k1 = f(hh);
    if (k1 < kSlopeFloor) {
      out.complete = true;
      break;
    }
    double k2 = f(hh + dt * b21 * k1);
    double k3 = f(hh + dt * (b31 * k1 + b32 * k2));
    double k4 = f(hh + dt * (b41 * k1 + b42 * k2 + b43 * k3));
    double k5 = f(hh + dt * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    double k6 = f(hh + dt * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
    double h5 = hh + dt * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    double h4 = hh + dt * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
    double err = std::abs(h5 - h4);
    double tol = ode_tol * (1.0 + std::abs(hh));
    if (err > tol) {
      dt *= std::max(0.2, 0.9 * std::pow(tol / err, 0.25));
      continue;
    }
    tt += dt;
    hh = h5;
    out.t.push_back(tt);
    out.h.push_back(hh);
    out.hp.push_back(f(hh));
    if (err > 0.0) dt *= std::min(5.0, 0.9 * std::pow(tol / err, 0.2));
    else dt *= 5.0;
    if (tt + dt > t_max) dt = t_max - tt + 1e-12;
  }
  out.h_max = out.h.back();
  return out;
}

}  // namespace recsim

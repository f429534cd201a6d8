#include "recsim/width.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "recsim/special.hpp"

namespace recsim {

namespace {

WidthFunction indicator_width() {
  WidthFunction w;
  w.wp = [](double h) { return h <= 1.0 ? 1.0 : 0.0; };
  w.wq = w.wp;
  w.h_max = 1.0;
  w.source = WidthFunction::Source::Indicator;
  return w;
}

}  // namespace

double WidthFunction::survival(double h) const {
  double s = wq(h) - h * wp(h);
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

WidthFunction width_gaussian(const TargetProposalPair& pair) {
  using Kind = ContinuousDistribution::Kind;
  if (pair.target == pair.proposal) return indicator_width();
  if (pair.target.kind() != Kind::Gaussian || pair.proposal.kind() != Kind::Gaussian)
    throw std::invalid_argument("width_gaussian: needs a Gaussian/Gaussian pair");
  const double vq = pair.target.param2(), vp = pair.proposal.param2();
  if (!(vq < vp)) throw std::domain_error("width_gaussian: unbounded ratio");

  // Standardise so the proposal is N(0,1); the ratio is invariant.
  const double mu = (pair.target.param1() - pair.proposal.param1()) / std::sqrt(vp);
  const double s2 = vq / vp;
  const double oms = 1.0 - s2;
  const double m = mu / oms;          // centre of the ratio's Gaussian form
  const double ss2 = s2 / oms;        // its squared width
  const double lam_p = m * m;         // noncentrality under P
  const double lam_q = mu * mu * s2 / (oms * oms);
  const double c = -std::log(s2) + mu * mu / oms;

  WidthFunction w;
  w.h_max = std::exp(0.5 * c);
  w.wp = [ss2, lam_p, c](double h) {
    if (h <= 0.0) return 1.0;
    double thr = ss2 * (-2.0 * std::log(h) + c);
    if (thr <= 0.0) return 0.0;
    return special::ncx2_cdf(thr, 1.0, lam_p);
  };
  w.wq = [ss2, s2, lam_q, c](double h) {
    if (h <= 0.0) return 1.0;
    double thr = ss2 * (-2.0 * std::log(h) + c) / s2;
    if (thr <= 0.0) return 0.0;
    return special::ncx2_cdf(thr, 1.0, lam_q);
  };
  w.source = WidthFunction::Source::ClosedFormGaussian;
  return w;
}

WidthFunction width_laplace(const TargetProposalPair& pair) {
  using Kind = ContinuousDistribution::Kind;
  if (pair.target == pair.proposal) return indicator_width();
  if (pair.target.kind() != Kind::Laplace || pair.proposal.kind() != Kind::Laplace)
    throw std::invalid_argument("width_laplace: needs a Laplace/Laplace pair");
  const double s = pair.target.param2() / pair.proposal.param2();
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("width_laplace: scale ratio outside (0,1)");
  const double m = std::abs(pair.target.param1() - pair.proposal.param1()) /
                   pair.proposal.param2();

  // Superlevel set {r >= h} = [xl, xr] in the standardised frame (proposal
  // L(0,1), target L(m, s), m >= 0), with t = ln(s h):
  //   xr = (m - s t) / (1 - s)
  //   xl = (s t + m) / (1 + s)   for t >= -m/s, else (s t + m) / (1 - s)
  const double lnhb = -m / s - std::log(s);  // branch point in ln h

  WidthFunction w;
  w.h_max = std::exp(m) / s;
  w.wp = [s, m, lnhb](double h) {
    if (h <= 0.0) return 1.0;
    const double lh = std::log(h);
    const double t = std::log(s) + lh;
    if (t > m) return 0.0;
    if (lh <= lnhb)
      return 1.0 - std::exp(s * t / (1.0 - s)) * std::cosh(m / (1.0 - s));
    return std::exp((s * s * t - m) / (1.0 - s * s)) *
           std::sinh(-s * (t - m) / (1.0 - s * s));
  };
  ContinuousDistribution qstd = ContinuousDistribution::laplace(m, s);
  w.wq = [s, m, qstd](double h) {
    if (h <= 0.0) return 1.0;
    const double t = std::log(s) + std::log(h);
    if (t > m) return 0.0;
    double xr = (m - s * t) / (1.0 - s);
    double xl = (t >= -m / s) ? (s * t + m) / (1.0 + s) : (s * t + m) / (1.0 - s);
    double v = qstd.cdf(xr) - qstd.cdf(xl);
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  };
  w.source = WidthFunction::Source::ClosedFormLaplace;
  return w;
}

WidthFunction width_empirical(const TargetProposalPair& pair, std::uint64_t n) {
  if (n < 1000) throw std::invalid_argument("width_empirical: needs n >= 1000");
  auto rp = std::make_shared<std::vector<double>>();
  auto rq = std::make_shared<std::vector<double>>();
  rp->reserve(n);
  rq->reserve(n);
  const double dn = static_cast<double>(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    double p = (static_cast<double>(i) + 0.5) / dn;
    rp->push_back(pair.ratio(pair.proposal.quantile(p)));
    rq->push_back(pair.ratio(pair.target.quantile(p)));
  }
  std::sort(rp->begin(), rp->end());
  std::sort(rq->begin(), rq->end());

  auto frac_ge = [](const std::vector<double>& xs, double h) {
    auto it = std::lower_bound(xs.begin(), xs.end(), h);
    return static_cast<double>(xs.end() - it) / static_cast<double>(xs.size());
  };
  WidthFunction w;
  w.h_max = std::max(rp->back(), rq->back());
  w.wp = [rp, frac_ge](double h) { return h <= 0.0 ? 1.0 : frac_ge(*rp, h); };
  w.wq = [rq, frac_ge](double h) { return h <= 0.0 ? 1.0 : frac_ge(*rq, h); };
  w.source = WidthFunction::Source::Empirical;
  return w;
}

WidthFunction make_width(const TargetProposalPair& pair, std::uint64_t empirical_n) {
  using Kind = ContinuousDistribution::Kind;
  if (pair.target == pair.proposal) return indicator_width();
  if (pair.target.kind() == Kind::Gaussian && pair.proposal.kind() == Kind::Gaussian &&
      pair.target.param2() < pair.proposal.param2())
    return width_gaussian(pair);
  if (pair.target.kind() == Kind::Laplace && pair.proposal.kind() == Kind::Laplace &&
      pair.target.param2() < pair.proposal.param2())
    return width_laplace(pair);
  return width_empirical(pair, empirical_n);
}

WidthFunction width_gaussian_product(double mu, double sigma2, int d) {
  if (!(sigma2 > 0.0 && sigma2 < 1.0) || d < 1)
    throw std::domain_error("width_gaussian_product: requires 0 < sigma2 < 1, d >= 1");
  const double dd = static_cast<double>(d);
  const double oms = 1.0 - sigma2;
  const double ss2 = sigma2 / oms;
  const double lam_p = dd * mu * mu / (oms * oms);
  const double lam_q = dd * mu * mu * sigma2 / (oms * oms);
  const double c = dd * (-std::log(sigma2)) + dd * mu * mu / oms;

  WidthFunction w;
  w.h_max = std::exp(0.5 * c);
  w.wp = [ss2, lam_p, c, dd](double h) {
    if (h <= 0.0) return 1.0;
    double thr = ss2 * (-2.0 * std::log(h) + c);
    if (thr <= 0.0) return 0.0;
    return special::ncx2_cdf(thr, dd, lam_p);
  };
  w.wq = [ss2, lam_q, c, dd, sigma2](double h) {
    if (h <= 0.0) return 1.0;
    double thr = ss2 * (-2.0 * std::log(h) + c) / sigma2;
    if (thr <= 0.0) return 0.0;
    return special::ncx2_cdf(thr, dd, lam_q);
  };
  w.source = WidthFunction::Source::ClosedFormGaussian;
  return w;
}

}  // namespace recsim

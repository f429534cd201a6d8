#include "recsim/distributions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "recsim/special.hpp"

namespace recsim {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178032973640562;
}  // namespace

ContinuousDistribution ContinuousDistribution::gaussian(double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(mean) || !std::isfinite(variance))
    throw std::invalid_argument("gaussian: variance must be finite and positive");
  return {Kind::Gaussian, mean, variance};
}

ContinuousDistribution ContinuousDistribution::laplace(double location, double scale) {
  if (!(scale > 0.0) || !std::isfinite(location) || !std::isfinite(scale))
    throw std::invalid_argument("laplace: scale must be finite and positive");
  return {Kind::Laplace, location, scale};
}

ContinuousDistribution ContinuousDistribution::uniform(double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("uniform: requires finite lo < hi");
  return {Kind::Uniform, lo, hi};
}

double ContinuousDistribution::log_density(double y) const {
  switch (kind_) {
    case Kind::Gaussian: {
      double d = y - p1_;
      return -0.5 * d * d / p2_ - 0.5 * std::log(p2_) - kLogSqrt2Pi;
    }
    case Kind::Laplace:
      return -std::abs(y - p1_) / p2_ - std::log(2.0 * p2_);
    case Kind::Uniform:
      return (y >= p1_ && y <= p2_) ? -std::log(p2_ - p1_) : -kInf;
  }
  return -kInf;
}

double ContinuousDistribution::cdf(double y) const {
  switch (kind_) {
    case Kind::Gaussian:
      return special::normal_cdf((y - p1_) / std::sqrt(p2_));
    case Kind::Laplace: {
      double z = (y - p1_) / p2_;
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    case Kind::Uniform:
      if (y <= p1_) return 0.0;
      if (y >= p2_) return 1.0;
      return (y - p1_) / (p2_ - p1_);
  }
  return 0.0;
}

double ContinuousDistribution::survival(double y) const {
  switch (kind_) {
    case Kind::Gaussian:
      return special::normal_sf((y - p1_) / std::sqrt(p2_));
    case Kind::Laplace: {
      double z = (y - p1_) / p2_;
      return z < 0.0 ? 1.0 - 0.5 * std::exp(z) : 0.5 * std::exp(-z);
    }
    case Kind::Uniform:
      return 1.0 - cdf(y);
  }
  return 0.0;
}

double ContinuousDistribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0) || std::isnan(p))
    throw std::domain_error("quantile: p outside [0, 1]");
  switch (kind_) {
    case Kind::Gaussian:
      return p1_ + std::sqrt(p2_) * special::normal_quantile(p);
    case Kind::Laplace:
      if (p == 0.0) return -kInf;
      if (p == 1.0) return kInf;
      return p < 0.5 ? p1_ + p2_ * std::log(2.0 * p) : p1_ - p2_ * std::log(2.0 * (1.0 - p));
    case Kind::Uniform:
      return p1_ + (p2_ - p1_) * p;
  }
  return 0.0;
}

double ContinuousDistribution::quantile_upper(double s) const {
  if (!(s >= 0.0 && s <= 1.0) || std::isnan(s))
    throw std::domain_error("quantile_upper: s outside [0, 1]");
  switch (kind_) {
    case Kind::Gaussian:
      return p1_ + std::sqrt(p2_) * special::normal_quantile_upper(s);
    case Kind::Laplace:
      if (s == 0.0) return kInf;
      if (s == 1.0) return -kInf;
      return s < 0.5 ? p1_ - p2_ * std::log(2.0 * s) : p1_ + p2_ * std::log(2.0 * (1.0 - s));
    case Kind::Uniform:
      return p2_ - (p2_ - p1_) * s;
  }
  return 0.0;
}

std::string ContinuousDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Gaussian: os << "gauss:" << p1_ << "," << p2_; break;
    case Kind::Laplace: os << "laplace:" << p1_ << "," << p2_; break;
    case Kind::Uniform: os << "unif:" << p1_ << "," << p2_; break;
  }
  return os.str();
}

double interval_mass(const ContinuousDistribution& dist, double lo, double hi) {
  if (!(lo < hi)) return 0.0;
  double m;
  if (lo == -kInf && hi == kInf) {
    m = 1.0;
  } else if (lo >= dist.quantile(0.5)) {
    m = dist.survival(lo) - dist.survival(hi);  // right tail: difference of survivals
  } else {
    m = dist.cdf(hi) - dist.cdf(lo);
  }
  return m < 0.0 ? 0.0 : (m > 1.0 ? 1.0 : m);
}

double quantile_restricted(const ContinuousDistribution& dist, double lo, double hi, double u) {
  if (!(lo < hi)) throw std::domain_error("quantile_restricted: empty restriction");
  if (!std::isfinite(u) || u < 0.0 || u > 1.0)
    throw std::domain_error("quantile_restricted: u must be finite in [0, 1]");
  if (lo == -kInf && hi == kInf) return dist.quantile(u);

  const double med = dist.quantile(0.5);
  double y;
  if (lo >= med) {
    // Right tail frame: survivals keep relative precision.
    double sl = dist.survival(lo), sh = dist.survival(hi);
    double mass = sl - sh;
    if (!(mass > 1e-300)) throw std::domain_error("quantile_restricted: empty restriction");
    y = dist.quantile_upper(sl - mass * u);
  } else if (hi <= med) {
    double fl = dist.cdf(lo), fh = dist.cdf(hi);
    double mass = fh - fl;
    if (!(mass > 1e-300)) throw std::domain_error("quantile_restricted: empty restriction");
    y = dist.quantile(fl + mass * u);
  } else {
    double fl = dist.cdf(lo), fh = dist.cdf(hi);
    double mass = fh - fl;
    if (!(mass > 1e-300)) throw std::domain_error("quantile_restricted: empty restriction");
    y = dist.quantile(fl + mass * u);
  }
  if (y < lo) y = lo;
  if (y > hi) y = hi;
  return y;
}

double TargetProposalPair::ratio(double y) const { return std::exp(log_ratio(y)); }

TargetProposalPair make_pair(const ContinuousDistribution& target,
                             const ContinuousDistribution& proposal) {
  using Kind = ContinuousDistribution::Kind;
  TargetProposalPair pair{target, proposal, 0.0, std::nullopt};
  if (target == proposal) {
    pair.mode_point = target.quantile(0.5);
    pair.sup_bound = 1.0;
    return pair;
  }
  if (target.kind() == Kind::Gaussian && proposal.kind() == Kind::Gaussian) {
    double mq = target.param1(), vq = target.param2();
    double mp = proposal.param1(), vp = proposal.param2();
    if (vq < vp) {
      // r is Gaussian-shaped with mean nu; completing the square gives the mode.
      double nu = (mq * vp - mp * vq) / (vp - vq);
      pair.mode_point = nu;
      pair.sup_bound = pair.ratio(nu);
    } else if (vq == vp) {
      pair.mode_point = mq > mp ? kInf : -kInf;  // monotone ratio, no finite mode
    } else {
      pair.mode_point = mq;  // unbounded ratio; mode of the ratio is at target tails
    }
    return pair;
  }
  if (target.kind() == Kind::Laplace && proposal.kind() == Kind::Laplace) {
    double s = target.param2() / proposal.param2();
    if (s < 1.0) {
      pair.mode_point = target.param1();
      pair.sup_bound = pair.ratio(target.param1());
    } else {
      pair.mode_point = target.param1();
    }
    return pair;
  }
  // Fallback: coarse grid search for the mode on the target's bulk.
  double best = target.quantile(0.5), bestv = pair.log_ratio(best);
  for (int i = 1; i < 4096; ++i) {
    double y = target.quantile(i / 4096.0);
    double v = pair.log_ratio(y);
    if (v > bestv) { bestv = v; best = y; }
  }
  pair.mode_point = best;
  return pair;
}

TargetProposalPair make_awgn_pair(double x, double sigma2, double rho2) {
  if (!(sigma2 > 0.0) || !(rho2 > 0.0) || !std::isfinite(sigma2) || !std::isfinite(rho2))
    throw std::invalid_argument("make_awgn_pair: variances must be finite and positive");
  auto target = ContinuousDistribution::gaussian(x, rho2);
  auto proposal = ContinuousDistribution::gaussian(0.0, sigma2 + rho2);
  TargetProposalPair pair{target, proposal, 0.0, std::nullopt};
  pair.mode_point = x * (sigma2 + rho2) / sigma2;
  pair.sup_bound = std::sqrt((sigma2 + rho2) / rho2) * std::exp(x * x / (2.0 * sigma2));
  return pair;
}

TargetProposalPair make_fixed_kl_pair(double kappa_bits, double delta_bits) {
  if (!(kappa_bits > 0.0) || !(delta_bits >= kappa_bits))
    throw std::invalid_argument("make_fixed_kl_pair: need delta >= kappa > 0");
  const double ln2 = special::kLn2;
  double b = 2.0 * ln2 * delta_bits - 1.0;
  // (b + ln s^2) e^{ln s^2} = b - 2 ln2 kappa, solved on the principal branch.
  double arg = (b - 2.0 * ln2 * kappa_bits) * std::exp(b);
  if (arg < -0.36787944117144233)
    throw std::domain_error("make_fixed_kl_pair: infeasible (kappa, delta)");
  double s2 = std::exp(special::lambert_w0(arg) - b);
  if (!(s2 > 0.0 && s2 < 1.0))
    throw std::domain_error("make_fixed_kl_pair: infeasible (kappa, delta)");
  double operand = 2.0 * (1.0 - s2) * (ln2 * delta_bits + 0.5 * std::log(s2));
  if (operand < 0.0) {
    if (operand > -1e-12) operand = 0.0;
    else throw std::domain_error("make_fixed_kl_pair: infeasible (kappa, delta)");
  }
  double mu = std::sqrt(operand);
  auto target = ContinuousDistribution::gaussian(mu, s2);
  auto proposal = ContinuousDistribution::gaussian(0.0, 1.0);
  return make_pair(target, proposal);
}

ContinuousDistribution overdispersed_proposal(double sigma2, double rho2) {
  if (!(sigma2 >= 0.0) || !(rho2 > 0.0))
    throw std::invalid_argument("overdispersed_proposal: bad variances");
  double delta2 = std::sqrt(sigma2) * std::sqrt(rho2 + sigma2);
  return ContinuousDistribution::gaussian(0.0, sigma2 + rho2 + delta2);
}

}  // namespace recsim

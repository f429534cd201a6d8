#pragma once

#include <optional>
#include <string>

namespace recsim {

// One-dimensional continuous distribution with exact-ish CDF/quantile pairs.
// All log densities are in nats.
class ContinuousDistribution {
 public:
  enum class Kind { Gaussian, Laplace, Uniform };

  static ContinuousDistribution gaussian(double mean, double variance);
  static ContinuousDistribution laplace(double location, double scale);
  static ContinuousDistribution uniform(double lo, double hi);

  Kind kind() const { return kind_; }
  double param1() const { return p1_; }  // mean / location / lo
  double param2() const { return p2_; }  // variance / scale / hi

  double log_density(double y) const;
  double cdf(double y) const;
  double survival(double y) const;
  double quantile(double p) const;
  // y with survival(y) = s; accurate deep into the upper tail.
  double quantile_upper(double s) const;

  std::string describe() const;

  bool operator==(const ContinuousDistribution&) const = default;

 private:
  ContinuousDistribution(Kind k, double a, double b) : kind_(k), p1_(a), p2_(b) {}
  Kind kind_;
  double p1_, p2_;
};

// Mass of (lo, hi] under dist, clamped to [0, 1]. Degenerate intervals give 0.
double interval_mass(const ContinuousDistribution& dist, double lo, double hi);

// Generalised inverse probability transform restricted to (lo, hi]:
// F^{-1}(F(lo) + (F(hi) - F(lo)) u), computed in whichever tail frame keeps
// precision. Throws "empty restriction" when the interval mass underflows.
double quantile_restricted(const ContinuousDistribution& dist, double lo, double hi, double u);

// A target Q / proposal P pair with the quantities the samplers consume.
struct TargetProposalPair {
  ContinuousDistribution target;
  ContinuousDistribution proposal;
  double mode_point = 0.0;                 // maximiser of the density ratio
  std::optional<double> sup_bound;         // M >= ||dQ/dP||_inf, natural scale

  double log_ratio(double y) const {
    return target.log_density(y) - proposal.log_density(y);
  }
  double ratio(double y) const;
};

// Generic pair; mode and sup bound filled in for the closed-form cases
// (Gaussian/Gaussian with bounded ratio, Laplace/Laplace, identical laws).
TargetProposalPair make_pair(const ContinuousDistribution& target,
                             const ContinuousDistribution& proposal);

// AWGN channel fixture: target N(x, rho2), proposal N(0, sigma2 + rho2).
TargetProposalPair make_awgn_pair(double x, double sigma2, double rho2);

// Gaussian target against N(0,1) with D_KL = kappa and D_inf = delta (bits),
// via the principal Lambert W branch. Throws "infeasible (kappa, delta)"
// outside the constructible region.
TargetProposalPair make_fixed_kl_pair(double kappa_bits, double delta_bits);

// N(0, sigma2 + rho2 + Delta^2_opt) with Delta^2_opt = sigma*sqrt(rho2+sigma2).
ContinuousDistribution overdispersed_proposal(double sigma2, double rho2);

}  // namespace recsim

#pragma once

#include <cstdint>
#include <functional>

#include "recsim/distributions.hpp"

namespace recsim {

// Width functions of a density ratio r = dQ/dP:
//   wp(h) = P_{Z~P}[r(Z) >= h],  wq(h) = P_{Z~Q}[r(Z) >= h].
struct WidthFunction {
  enum class Source { ClosedFormGaussian, ClosedFormLaplace, Empirical, Indicator };

  std::function<double(double)> wp;
  std::function<double(double)> wq;
  double h_max = 0.0;  // sup of the ratio (wp vanishes above it)
  Source source = Source::Indicator;

  // Survival function of the associated variable H: S(h) = wq(h) - h wp(h).
  double survival(double h) const;
};

// Closed-form width for Gaussian target/proposal with bounded ratio
// (target variance < proposal variance), via the noncentral chi-square CDF.
// Identical laws give the indicator width. Throws "unbounded ratio" otherwise.
WidthFunction width_gaussian(const TargetProposalPair& pair);

// Closed-form width for Laplace target/proposal with scale ratio s in (0, 1).
WidthFunction width_laplace(const TargetProposalPair& pair);

// Monte Carlo width from n quasi-stratified (quantile grid) evaluations.
WidthFunction width_empirical(const TargetProposalPair& pair, std::uint64_t n);

// Closed form if available, otherwise empirical with the given sample count.
WidthFunction make_width(const TargetProposalPair& pair, std::uint64_t empirical_n = 200000);

// Width of the d-fold product pair N(mu,sigma2 I_d) vs N(0, I_d), sigma2 < 1.
WidthFunction width_gaussian_product(double mu, double sigma2, int d);

}  // namespace recsim

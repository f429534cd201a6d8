#pragma once

#include <cstdint>
#include <vector>

namespace recsim::stats {

struct Summary {
  std::uint64_t n = 0;
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

// Median-unbiased (type-8) quantile of a sample; p in [0, 1].
double quantile_type8(std::vector<double> xs, double p);

Summary summarize(const std::vector<double>& xs);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_pvalue(std::vector<double> a, std::vector<double> b);

// Chi-square goodness of fit: observed counts vs expected probabilities
// (cells with expected count < 1 are pooled into the last cell).
// Returns the p-value.
double chi2_gof_pvalue(const std::vector<std::uint64_t>& counts,
                       const std::vector<double>& probs);

}  // namespace recsim::stats

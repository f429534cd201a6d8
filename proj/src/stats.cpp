#include "recsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "recsim/special.hpp"

namespace recsim::stats {

double quantile_type8(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double h = (n + 1.0 / 3.0) * p + 1.0 / 3.0;
  if (h <= 1.0) return xs.front();
  if (h >= n) return xs.back();
  std::size_t k = static_cast<std::size_t>(std::floor(h));
  double frac = h - static_cast<double>(k);
  return xs[k - 1] + frac * (xs[k] - xs[k - 1]);
}

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m) * (x - m);
  var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
  s.mean = m;
  s.se = std::sqrt(var / static_cast<double>(xs.size()));
  s.median = quantile_type8(xs, 0.5);
  s.q25 = quantile_type8(xs, 0.25);
  s.q75 = quantile_type8(xs, 0.75);
  return s;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue(std::vector<double> a, std::vector<double> b) {
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = ks_statistic(std::move(a), std::move(b));
  double ne = na * nb / (na + nb);
  // Asymptotic with the Stephens small-sample correction.
  double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  return special::kolmogorov_sf(lam);
}

double chi2_gof_pvalue(const std::vector<std::uint64_t>& counts,
                       const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2)
    throw std::invalid_argument("chi2_gof: size mismatch");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double n = static_cast<double>(total);

  // Pool trailing low-expectation cells so the asymptotics hold.
  std::vector<double> obs, exp;
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double e = n * probs[k];
    if (e < 1.0) {
      pool_o += static_cast<double>(counts[k]);
      pool_e += e;
    } else {
      obs.push_back(static_cast<double>(counts[k]));
      exp.push_back(e);
    }
  }
  if (pool_e > 0.0) {
    obs.push_back(pool_o);
    exp.push_back(pool_e);
  }
  if (obs.size() < 2) throw std::invalid_argument("chi2_gof: too few usable cells");
  double stat = 0.0;
  for (std::size_t k = 0; k < obs.size(); ++k)
    stat += (obs[k] - exp[k]) * (obs[k] - exp[k]) / exp[k];
  double dof = static_cast<double>(obs.size() - 1);
  return special::chi2_sf(stat, dof);
}

}  // namespace recsim::stats

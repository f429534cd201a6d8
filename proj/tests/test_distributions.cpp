#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/rng.hpp"

using namespace recsim;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double mc_kl_bits(const TargetProposalPair& pair, std::uint64_t seed, int n, double* se_out) {
  // Monte Carlo estimate of E_{Y~Q}[lb r(Y)] with inverse-CDF draws.
  SeedStream s(seed);
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double y = pair.target.quantile(s.next_uniform());
    double v = pair.log_ratio(y) * 1.4426950408889634;
    sum += v;
    sum2 += v * v;
  }
  double mean = sum / n;
  *se_out = std::sqrt((sum2 / n - mean * mean) / n);
  return mean;
}
}  // namespace

TEST_CASE("cdf/quantile round trips") {
  auto dists = {ContinuousDistribution::gaussian(0.3, 2.0),
                ContinuousDistribution::laplace(-1.0, 0.7),
                ContinuousDistribution::uniform(-2.0, 5.0)};
  for (const auto& d : dists) {
    for (double p : {1e-9, 1e-4, 0.2, 0.5, 0.8, 1.0 - 1e-4, 1.0 - 1e-9})
      CHECK(d.cdf(d.quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
      double y = d.quantile(p);
      CHECK(d.quantile(d.cdf(y)) == doctest::Approx(y).epsilon(1e-9));
    }
  }
}

TEST_CASE("quantile_restricted basics") {
  auto stdnorm = ContinuousDistribution::gaussian(0.0, 1.0);
  CHECK(quantile_restricted(stdnorm, -kInf, kInf, 0.5) == 0.0);
  // Unrestricted path is bit-for-bit the plain quantile.
  for (double u : {0.017, 0.25, 0.5, 0.93})
    CHECK(quantile_restricted(stdnorm, -kInf, kInf, u) == stdnorm.quantile(u));

  auto unif = ContinuousDistribution::uniform(0.0, 1.0);
  CHECK(quantile_restricted(unif, 0.2, 0.6, 0.25) == doctest::Approx(0.3).epsilon(1e-15));

  CHECK(quantile_restricted(stdnorm, 0.0, kInf, 0.5) ==
        doctest::Approx(0.674489750196).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(quantile_restricted(stdnorm, 40.0, 41.0, 0.5),
                       doctest::Contains("empty restriction"), std::domain_error);
  CHECK_THROWS(quantile_restricted(stdnorm, 0.0, 1.0, std::nan("")));

  // Results stay inside the restriction even deep in the tail.
  for (double lo : {3.0, 8.0, 20.0}) {
    double y = quantile_restricted(stdnorm, lo, lo + 0.5, 0.7);
    CHECK(y >= lo);
    CHECK(y <= lo + 0.5);
  }
}

TEST_CASE("interval_mass") {
  auto stdnorm = ContinuousDistribution::gaussian(0.0, 1.0);
  CHECK(interval_mass(stdnorm, -kInf, kInf) == 1.0);
  CHECK(interval_mass(stdnorm, 0.0, kInf) == doctest::Approx(0.5).epsilon(1e-15));
  auto unif = ContinuousDistribution::uniform(0.0, 1.0);
  CHECK(interval_mass(unif, 0.2, 0.6) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(interval_mass(unif, 0.6, 0.6) == 0.0);
}

TEST_CASE("awgn pair") {
  // MI of the sigma2=3, rho2=1 channel is 1 bit.
  double mi = 0.5 * std::log2((3.0 + 1.0) / 1.0);
  CHECK(mi == doctest::Approx(1.0));

  auto p0 = make_awgn_pair(0.0, 3.0, 1.0);
  CHECK(*p0.sup_bound == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(p0.mode_point == 0.0);

  // The mode attains the sup bound.
  for (double x : {0.0, 0.7, -2.3}) {
    auto p = make_awgn_pair(x, 3.0, 1.0);
    CHECK(std::exp(p.log_ratio(p.mode_point)) == doctest::Approx(*p.sup_bound).epsilon(1e-9));
    // Local-max check of the mode point.
    CHECK(p.log_ratio(p.mode_point) >= p.log_ratio(p.mode_point + 1e-6));
    CHECK(p.log_ratio(p.mode_point) >= p.log_ratio(p.mode_point - 1e-6));
  }

  CHECK(kl_divergence(make_awgn_pair(0.0, 1.0, 1.0)) ==
        doctest::Approx(0.1393262397777592).epsilon(1e-10));

  // Monte Carlo KL cross-check confirms the completed-square ratio form.
  for (double x : {0.0, 1.1}) {
    auto p = make_awgn_pair(x, 3.0, 1.0);
    double se = 0.0;
    double est = mc_kl_bits(p, 99 + static_cast<int>(10 * x), 100000, &se);
    CHECK(std::abs(est - kl_divergence(p)) < 4.0 * se);
  }
}

TEST_CASE("fixed-kl pair") {
  // Round trip over the panel-C grid.
  for (double delta : {5.0, 10.0, 15.0, 20.0, 25.0}) {
    auto p = make_fixed_kl_pair(2.0, delta);
    CHECK(std::abs(kl_divergence(p) - 2.0) < 1e-6);
    CHECK(std::abs(renyi_inf(p) - delta) < 1e-6);
    CHECK(p.target.param2() > 0.0);
    CHECK(p.target.param2() < 1.0);
  }
  CHECK(renyi_inf(make_fixed_kl_pair(2.0, 10.0)) >= kl_divergence(make_fixed_kl_pair(2.0, 10.0)));
  // The Gaussian family cannot reach delta = kappa; the constructor says so.
  CHECK_THROWS_WITH_AS(make_fixed_kl_pair(2.0, 2.0), doctest::Contains("infeasible"),
                       std::domain_error);
  CHECK_THROWS(make_fixed_kl_pair(2.0, 1.0));
}

TEST_CASE("overdispersed proposal") {
  auto d = overdispersed_proposal(1.0, 1.0);
  CHECK(d.param2() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
  auto marginal = overdispersed_proposal(0.0, 1.0);
  CHECK(marginal.param2() == doctest::Approx(1.0));

  // With overdispersion the running mean of ||r_x||_inf over x ~ N(0, s2)
  // stabilises.
  double s2 = 1.0, r2 = 1.0;
  SeedStream s(7);
  double sum_od_half = 0.0, sum_od = 0.0;
  const int n = 10000;
  auto od = overdispersed_proposal(s2, r2);
  auto gauss01 = ContinuousDistribution::gaussian(0, 1);
  for (int i = 0; i < n; ++i) {
    double x = std::sqrt(s2) * gauss01.quantile(s.next_uniform());
    TargetProposalPair odp = make_pair(ContinuousDistribution::gaussian(x, r2), od);
    double sup_od = std::exp(odp.log_ratio(odp.mode_point));
    sum_od += sup_od;
    if (i < n / 2) sum_od_half += sup_od;
  }
  double growth_od = (sum_od / n) / (sum_od_half / (n / 2));
  CHECK(growth_od < 1.05);  // stabilised

  // Divergence without overdispersion, finiteness with it, checked on the
  // integrand ||r_x||_inf phi(x): constant tail vs decaying tail.
  auto phi = [&](double x) { return std::exp(gauss01.log_density(x)); };
  auto plain_sup = [&](double x) { return *make_awgn_pair(x, s2, r2).sup_bound; };
  auto od_sup = [&](double x) {
    auto p = make_pair(ContinuousDistribution::gaussian(x, r2), od);
    return std::exp(p.log_ratio(p.mode_point));
  };
  double plain4 = plain_sup(4.0) * phi(4.0), plain8 = plain_sup(8.0) * phi(8.0);
  double od4 = od_sup(4.0) * phi(4.0), od8 = od_sup(8.0) * phi(8.0);
  CHECK(plain8 == doctest::Approx(plain4).epsilon(1e-9));  // non-integrable tail
  CHECK(od8 < 0.01 * od4);                                 // integrable tail
}

TEST_CASE("generic pair constructor KL cross-check") {
  auto q = ContinuousDistribution::laplace(0.3, 0.5);
  auto p = ContinuousDistribution::laplace(0.0, 1.0);
  auto pair = make_pair(q, p);
  double se = 0.0;
  double est = mc_kl_bits(pair, 5, 100000, &se);
  CHECK(std::abs(est - kl_divergence(pair)) < 4.0 * se);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/rng.hpp"
#include "recsim/special.hpp"
#include "recsim/stretch.hpp"
#include "recsim/width.hpp"

using namespace recsim;
using recsim::special::kEulerGamma;
using recsim::special::kLbE;

namespace {

TargetProposalPair gauss_fixture() {
  return make_pair(ContinuousDistribution::gaussian(1.0, 0.0625),
                   ContinuousDistribution::gaussian(0.0, 1.0));
}

TargetProposalPair laplace_fixture(double m, double s) {
  return make_pair(ContinuousDistribution::laplace(m, s),
                   ContinuousDistribution::laplace(0.0, 1.0));
}

// Monte Carlo width oracle: survival fraction of r(Z), Z ~ P, i.i.d. draws.
double mc_width_p(const TargetProposalPair& pair, double h, int n, std::uint64_t seed,
                  double* se) {
  SeedStream s(seed);
  int hits = 0;
  const double lh = std::log(h);
  for (int i = 0; i < n; ++i)
    if (pair.log_ratio(pair.proposal.quantile(s.next_uniform())) >= lh) ++hits;
  double p = static_cast<double>(hits) / n;
  *se = std::sqrt(p * (1.0 - p) / n);
  return p;
}

}  // namespace

TEST_CASE("kl closed forms") {
  auto same = make_pair(ContinuousDistribution::gaussian(0, 1),
                        ContinuousDistribution::gaussian(0, 1));
  CHECK(kl_divergence(same) == 0.0);
  CHECK(kl_divergence(laplace_fixture(0.0, 0.5)) ==
        doctest::Approx((0.5 + std::log(2.0) - 1.0) * kLbE).epsilon(1e-12));
  CHECK(kl_divergence(gauss_fixture()) == doctest::Approx(2.0450842200277796).epsilon(1e-10));
}

TEST_CASE("renyi_inf") {
  CHECK(renyi_inf(make_pair(ContinuousDistribution::laplace(0, 1),
                            ContinuousDistribution::laplace(0, 1))) == 0.0);
  CHECK(renyi_inf(make_awgn_pair(0.0, 3.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(renyi_inf(make_fixed_kl_pair(2.0, 10.0)) == doctest::Approx(10.0).epsilon(1e-6));
  // Unbounded ratio.
  CHECK(std::isinf(renyi_inf(make_pair(ContinuousDistribution::gaussian(0, 2),
                                       ContinuousDistribution::gaussian(0, 1)))));
  // Numeric search path (sup bound withheld).
  auto g = gauss_fixture();
  g.sup_bound.reset();
  CHECK(renyi_inf(g) == doctest::Approx(std::log2(6.818419461291012)).epsilon(1e-9));
}

TEST_CASE("gaussian width function") {
  auto pair = gauss_fixture();
  auto w = width_gaussian(pair);

  // Q = P degenerates to the indicator width.
  auto ind = width_gaussian(make_pair(ContinuousDistribution::gaussian(0, 1),
                                      ContinuousDistribution::gaussian(0, 1)));
  CHECK(ind.wp(0.5) == 1.0);
  CHECK(ind.wp(1.5) == 0.0);

  CHECK_THROWS_WITH_AS(width_gaussian(make_pair(ContinuousDistribution::gaussian(0, 2),
                                                ContinuousDistribution::gaussian(0, 1))),
                       doctest::Contains("unbounded ratio"), std::domain_error);

  // Normalisation: integral of wp over h is 1.
  double total = quad::integrate([&](double h) { return w.wp(h); }, 0.0, w.h_max, 1e-8);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

  // Monte Carlo width oracle at h = 1.
  double se = 0.0;
  double mc = mc_width_p(pair, 1.0, 1000000, 13, &se);
  CHECK(std::abs(w.wp(1.0) - mc) < 3.0 * se);

  // wp and wq are nonincreasing with wp(0) = wq(0) = 1.
  CHECK(w.wp(0.0) == 1.0);
  CHECK(w.wq(0.0) == 1.0);
  double prev_p = 2.0, prev_q = 2.0;
  for (double h = 1e-3; h < w.h_max; h *= 1.6) {
    CHECK(w.wp(h) <= prev_p + 1e-12);
    CHECK(w.wq(h) <= prev_q + 1e-12);
    prev_p = w.wp(h);
    prev_q = w.wq(h);
  }
}

TEST_CASE("laplace width function") {
  // s -> 1 approaches the indicator width.
  auto near = width_laplace(laplace_fixture(0.0, 0.999999));
  CHECK(near.wp(0.9) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(near.wp(1.1) == doctest::Approx(0.0).epsilon(1e-3));

  auto w = width_laplace(laplace_fixture(0.0, 0.5));
  double se = 0.0;
  double mc = mc_width_p(laplace_fixture(0.0, 0.5), 1.0, 1000000, 29, &se);
  CHECK(std::abs(w.wp(1.0) - mc) < 3.0 * se);

  // Both branches continuous at the branch point (m != 0 exercises the
  // adopted exponent grouping).
  auto wm = width_laplace(laplace_fixture(0.3, 0.5));
  double hb = std::exp(-0.3 / 0.5 - std::log(0.5));
  CHECK(wm.wp(hb * (1.0 - 1e-9)) == doctest::Approx(wm.wp(hb * (1.0 + 1e-9))).epsilon(1e-7));
  double se2 = 0.0;
  double mc2 = mc_width_p(laplace_fixture(0.3, 0.5), 1.0, 1000000, 31, &se2);
  CHECK(std::abs(wm.wp(1.0) - mc2) < 3.0 * se2);

  CHECK_THROWS(width_laplace(laplace_fixture(0.0, 1.5)));
}

TEST_CASE("empirical width") {
  auto same = make_pair(ContinuousDistribution::gaussian(0, 1),
                        ContinuousDistribution::gaussian(0, 1));
  auto we = width_empirical(same, 5000);
  CHECK(we.wp(0.5) == 1.0);
  CHECK(we.wp(1.5) == 0.0);
  CHECK(we.wp(0.0) == 1.0);

  // DKW-style gap against the closed form.
  auto pair = gauss_fixture();
  const int n = 40000;
  auto wexact = width_gaussian(pair);
  auto wemp = width_empirical(pair, n);
  double worst = 0.0;
  for (double h = 0.01; h < wexact.h_max; h += 0.05)
    worst = std::max(worst, std::abs(wexact.wp(h) - wemp.wp(h)));
  CHECK(worst <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("survival identity") {
  auto pair = gauss_fixture();
  auto w = width_gaussian(pair);
  for (double h : {0.25, 1.0, 2.5, 5.0}) {
    double tail = quad::integrate([&](double x) { return w.wp(x); }, h, w.h_max, 1e-9);
    CHECK(std::abs(w.survival(h) - tail) <= 1e-6);
  }
}

TEST_CASE("csd closed forms and sandwich") {
  CHECK(csd(make_pair(ContinuousDistribution::laplace(0, 1),
                      ContinuousDistribution::laplace(0, 1))) == 0.0);

  // Laplace closed form (s + psi(1/s) + gamma - 1) / ln 2.
  for (double s : {0.2, 0.5, 0.8}) {
    double closed = (s + special::digamma(1.0 / s) + kEulerGamma - 1.0) * kLbE;
    CHECK(std::abs(csd(laplace_fixture(0.0, s), 1e-9) - closed) < 1e-6);
  }
  CHECK(csd(laplace_fixture(0.0, 0.5), 1e-9) == doctest::Approx(0.5 * kLbE).epsilon(1e-7));

  // Sandwich for a grid of pairs.
  std::vector<TargetProposalPair> pairs;
  for (int i = 0; i < 20; ++i) {
    double mu = -1.5 + 0.15 * i;
    double v = 0.05 + 0.045 * i;
    pairs.push_back(make_pair(ContinuousDistribution::gaussian(mu, v),
                              ContinuousDistribution::gaussian(0, 1)));
  }
  for (int i = 0; i < 20; ++i) {
    double m = -1.0 + 0.1 * i;
    double s = 0.1 + 0.04 * i;
    pairs.push_back(laplace_fixture(m, s));
  }
  for (const auto& p : pairs) {
    double dkl = kl_divergence(p);
    double dcs = csd(p, 1e-8);
    CHECK(dkl <= dcs + 1e-9);
    CHECK(dcs <= dkl + std::log2(dkl + 1.0) + 1.0 + 1e-9);
  }
}

TEST_CASE("csd empirical agrees with closed form") {
  auto pair = gauss_fixture();
  double exact = csd(pair, 1e-9);
  double emp = csd_from_width(width_empirical(pair, 1000000));
  CHECK(std::abs(exact - emp) < 0.02);
}

TEST_CASE("product gaussian gap") {
  auto pair = gauss_fixture();
  double d1 = csd_gap_product_gaussian(1.0, 0.0625, 1);
  CHECK(d1 == doctest::Approx(csd(pair, 1e-9) - kl_divergence(pair)).epsilon(1e-5));

  std::vector<double> lbd, gap;
  for (int d : {1, 2, 4, 8, 16, 32, 64}) {
    lbd.push_back(std::log2(static_cast<double>(d)));
    gap.push_back(csd_gap_product_gaussian(1.0, 0.25, d));
  }
  // Least-squares slope of gap vs lb d.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lbd.size(); ++i) {
    sx += lbd[i];
    sy += gap[i];
    sxx += lbd[i] * lbd[i];
    sxy += lbd[i] * gap[i];
  }
  double n = static_cast<double>(lbd.size());
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope >= 0.4);
  CHECK(slope <= 0.6);
}

TEST_CASE("stretch solver") {
  // Q = P: analytic solution sha(t) = 1 - e^-t.
  auto same = make_pair(ContinuousDistribution::gaussian(0, 1),
                        ContinuousDistribution::gaussian(0, 1));
  auto w = make_width(same);
  auto st = solve_stretch(same, w, 100.0, 1e-10);
  CHECK(st.complete);
  for (double t : {0.1, 0.5, 1.0, 3.0, 10.0})
    CHECK(st.sha(t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-6));
  for (double h : {0.1, 0.5, 0.9})
    CHECK(st.sigma(h) == doctest::Approx(-std::log(1.0 - h)).epsilon(1e-6));

  // Initial conditions.
  auto pair = gauss_fixture();
  auto wg = width_gaussian(pair);
  auto sg = solve_stretch(pair, wg, 1e7, 1e-10);
  CHECK(sg.sha(0.0) == 0.0);
  CHECK(sg.sha_prime(1e-9) == doctest::Approx(1.0).epsilon(1e-6));

  // Inverse-pair property on the table interior.
  for (double h = 0.05; h < sg.h_max * 0.999; h += sg.h_max / 23.0) {
    double t = sg.sigma(h);
    if (!std::isinf(t)) CHECK(std::abs(sg.sha(t) - h) <= 1e-6 * (1.0 + h));
  }

  // sha approaches the sup of the ratio.
  double sup = 6.818419461291012;
  auto st2 = solve_stretch(pair, wg, 1000.0 * sup, 1e-10);
  CHECK(std::abs(st2.sha(1000.0 * sup * 0.999) - sup) <= 1e-3 * sup);

  // sha' is a survival probability.
  for (double t : {0.5, 2.0, 8.0, 30.0}) {
    CHECK(sg.sha_prime(t) >= 0.0);
    CHECK(sg.sha_prime(t) <= 1.0);
  }
}

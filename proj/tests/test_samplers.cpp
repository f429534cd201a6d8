#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/poisson.hpp"
#include "recsim/samplers.hpp"
#include "recsim/stats.hpp"
#include "recsim/stretch.hpp"

using namespace recsim;

namespace {

const auto kSame = make_pair(ContinuousDistribution::gaussian(0, 1),
                             ContinuousDistribution::gaussian(0, 1));
const auto kAwgn = make_awgn_pair(0.0, 3.0, 1.0);  // M = 2

TargetProposalPair gauss_fixture() {
  return make_pair(ContinuousDistribution::gaussian(1.0, 0.0625),
                   ContinuousDistribution::gaussian(0.0, 1.0));
}

std::vector<double> target_reference(const TargetProposalPair& pair, int n,
                                     std::uint64_t seed) {
  SeedStream s(seed);
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(pair.target.quantile(s.next_uniform()));
  return out;
}

}  // namespace

TEST_CASE("rejection: identical laws accept immediately") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = rejection_sample(kSame, 1.0, seed);
    CHECK(r.selected_index == 1);
    CHECK(r.steps == 1);
  }
}

TEST_CASE("rejection: geometric runtime and exactness") {
  const int n = 10000;
  std::vector<double> ks;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> samples;
  for (int i = 0; i < n; ++i) {
    auto r = rejection_sample(kAwgn, 2.0, 100000 + i);
    sum += static_cast<double>(r.steps);
    sum2 += static_cast<double>(r.steps) * static_cast<double>(r.steps);
    samples.push_back(r.sample);
    CHECK(r.sample == decode_global(100000 + i, r.selected_index, kAwgn.proposal));
  }
  double mean = sum / n;
  double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
  CHECK(stats::ks_pvalue(samples, target_reference(kAwgn, n, 555)) > 0.001);
}

TEST_CASE("rejection: bad bound is rejected") {
  CHECK_THROWS_WITH_AS(rejection_sample(kAwgn, 1.2, 3), doctest::Contains("invalid bound"),
                       std::runtime_error);
}

TEST_CASE("astar: basics") {
  // Q = P with M = 1: the first arrival is selected, one non-terminating step.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = astar_sample(kSame, 1.0, seed);
    CHECK(r.selected_index == 1);
    CHECK(r.steps == 1);
  }
  // Determinism.
  auto a = astar_sample(kAwgn, 2.0, 42), b = astar_sample(kAwgn, 2.0, 42);
  CHECK(a.sample == b.sample);
  CHECK(a.selected_index == b.selected_index);
  CHECK(a.steps == b.steps);
}

TEST_CASE("astar: runtime law, N <= K, codelength moment, argmin") {
  const int n = 10000;
  double sum_lbn = 0.0;
  std::vector<double> samples;
  std::vector<std::uint64_t> steps;
  for (int i = 0; i < n; ++i) {
    std::uint64_t seed = 200000 + i;
    auto r = astar_sample(kAwgn, 2.0, seed);
    CHECK(r.selected_index >= 1);
    CHECK(r.selected_index <= std::max<std::uint64_t>(r.steps, 1));
    sum_lbn += std::log2(static_cast<double>(r.selected_index));
    samples.push_back(r.sample);
    steps.push_back(r.steps);

    // Brute-force re-scan: N is the argmin of T/r over the first K+1 arrivals.
    GlobalArrivalGen gen(SeedStream(seed), kAwgn.proposal);
    double best = 1e300;
    std::uint64_t best_n = 0;
    for (std::uint64_t k = 1; k <= r.steps + 1; ++k) {
      Arrival arr = gen.next();
      double score = arr.time / kAwgn.ratio(arr.location);
      if (score < best) {
        best = score;
        best_n = k;
      }
    }
    CHECK(best_n == r.selected_index);
  }
  // K ~ Geom(1/2): chi-square GOF.
  std::vector<std::uint64_t> counts(20, 0);
  for (auto k : steps) counts[std::min<std::size_t>(k - 1, counts.size() - 1)]++;
  std::vector<double> probs(counts.size());
  double cum = 0.0;
  for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
    probs[k] = std::pow(0.5, static_cast<double>(k + 1));
    cum += probs[k];
  }
  probs.back() = 1.0 - cum;
  CHECK(stats::chi2_gof_pvalue(counts, probs) > 0.001);

  // E[lb N] <= D_KL + 1 (AWGN at MI=1 has per-x D_KL ~ 0.21 at x=0).
  CHECK(sum_lbn / n <= kl_divergence(kAwgn) + 1.0);
  CHECK(stats::ks_pvalue(samples, target_reference(kAwgn, n, 556)) > 0.001);

  // Log-domain run agrees with the linear-domain run.
  for (std::uint64_t seed = 77; seed < 97; ++seed) {
    SamplerOptions log_opts{.log_domain = true};
    auto lin = astar_sample(kAwgn, 2.0, seed);
    auto lg = astar_sample(kAwgn, 2.0, seed, log_opts);
    CHECK(lin.sample == lg.sample);
    CHECK(lin.selected_index == lg.selected_index);
    CHECK(lin.steps == lg.steps);
  }
}

TEST_CASE("gprs: identity pair accepts the first arrival") {
  auto w = make_width(kSame);
  auto st = solve_stretch(kSame, w, 100.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto r = gprs_sample(kSame, st, seed);
    CHECK(r.selected_index == 1);
    CHECK(r.steps == 1);
  }
}

TEST_CASE("gprs: sample complexity and exactness") {
  auto w = width_gaussian(kAwgn);
  auto st = solve_stretch(kAwgn, w, 1e7);
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> samples;
  for (int i = 0; i < n; ++i) {
    auto r = gprs_sample(kAwgn, st, 300000 + i);
    sum += static_cast<double>(r.steps);
    sum2 += static_cast<double>(r.steps) * static_cast<double>(r.steps);
    samples.push_back(r.sample);
    CHECK(r.selected_index == r.steps);
  }
  double mean = sum / n, sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
  CHECK(stats::ks_pvalue(samples, target_reference(kAwgn, n, 557)) > 0.001);
}

TEST_CASE("selection sampler lower bound") {
  // E[K] >= 2^{D_inf} - 3 SE for the exact global samplers.
  auto fix = gauss_fixture();
  double dinf = renyi_inf(fix);
  double target = std::exp2(dinf);
  auto w = width_gaussian(fix);
  auto st = solve_stretch(fix, w, 1e7);
  const int n = 4000;
  for (int alg = 0; alg < 3; ++alg) {
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      RunResult r;
      if (alg == 0) r = rejection_sample(fix, target, 400000 + i);
      else if (alg == 1) r = astar_sample(fix, target, 400000 + i);
      else r = gprs_sample(fix, st, 400000 + i);
      sum += static_cast<double>(r.steps);
      sum2 += static_cast<double>(r.steps) * static_cast<double>(r.steps);
    }
    double mean = sum / n, sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(mean >= target - 3.0 * sd / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("parallel: J=1 matches the serial law and totals scale") {
  // Law comparison via chi-square on K over 10^4 runs.
  const int n = 10000;
  std::vector<std::uint64_t> c_serial(16, 0), c_par(16, 0);
  for (int i = 0; i < n; ++i) {
    c_serial[std::min<std::size_t>(astar_sample(kAwgn, 2.0, 500000 + i).steps - 1, 15)]++;
    c_par[std::min<std::size_t>(astar_parallel(kAwgn, 2.0, 1, 600000 + i).steps - 1, 15)]++;
  }
  // Two-sample chi-square via GOF of parallel counts against serial fractions.
  std::vector<double> probs(16);
  for (int k = 0; k < 16; ++k) probs[k] = static_cast<double>(c_serial[k]) / n;
  // Give empty reference cells a tiny floor.
  double total = 0.0;
  for (auto& p : probs) {
    p = std::max(p, 1e-9);
    total += p;
  }
  for (auto& p : probs) p /= total;
  CHECK(stats::chi2_gof_pvalue(c_par, probs) > 0.001);

  // E[total] = M + J - 1 and ||r||inf + J - 1.
  auto w = width_gaussian(kAwgn);
  auto st = solve_stretch(kAwgn, w, 1e7);
  for (std::uint32_t j : {2u, 4u}) {
    double sum_a = 0.0, sum2_a = 0.0, sum_g = 0.0, sum2_g = 0.0;
    for (int i = 0; i < n; ++i) {
      double ka = static_cast<double>(astar_parallel(kAwgn, 2.0, j, 700000 + i).steps);
      double kg = static_cast<double>(gprs_parallel(kAwgn, st, j, 800000 + i).steps);
      sum_a += ka;
      sum2_a += ka * ka;
      sum_g += kg;
      sum2_g += kg * kg;
    }
    double expect = 2.0 + j - 1.0;
    double mean_a = sum_a / n, sd_a = std::sqrt(sum2_a / n - mean_a * mean_a);
    double mean_g = sum_g / n, sd_g = std::sqrt(sum2_g / n - mean_g * mean_g);
    CHECK(std::abs(mean_a - expect) < 3.0 * sd_a / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(mean_g - expect) < 3.0 * sd_g / std::sqrt(static_cast<double>(n)));
  }

  // Exactness and thread-tag decodability.
  std::vector<double> samples;
  for (int i = 0; i < n; ++i) {
    auto r = astar_parallel(kAwgn, 2.0, 4, 900000 + i);
    samples.push_back(r.sample);
    auto [jstar, nj] = *r.thread_tag;
    CHECK(r.sample ==
          arrival_location(SeedStream(900000 + i).fold_in(jstar), nj, kAwgn.proposal));
  }
  CHECK(stats::ks_pvalue(samples, target_reference(kAwgn, n, 558)) > 0.001);
}

TEST_CASE("step-limited samplers") {
  // Unlimited budget reproduces the exact sampler on every seed.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto exact = astar_sample(kAwgn, 2.0, seed);
    auto lim = astar_limited(kAwgn, 2.0, kUnlimited, seed);
    CHECK(lim.sample == exact.sample);
    CHECK(lim.selected_index == exact.selected_index);
    CHECK(!lim.exhausted_budget);
  }
  // Budget 1 returns the first proposal.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto lim = astar_limited(kAwgn, 2.0, 1, seed);
    CHECK(lim.selected_index == 1);
    CHECK(lim.sample == arrival_location(SeedStream(seed), 1, kAwgn.proposal));
  }
  // Exact agreement whenever the exact run terminated within the budget.
  auto fix = make_fixed_kl_pair(2.0, 5.0);
  double m = std::exp2(renyi_inf(fix));
  int exhausted = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    auto exact = astar_sample(fix, m, seed);
    auto lim = astar_limited(fix, m, 64, seed);
    if (exact.steps <= 64) {
      CHECK(lim.sample == exact.sample);
      CHECK(lim.selected_index == exact.selected_index);
    } else {
      CHECK(lim.exhausted_budget);
      ++exhausted;
    }
  }
  CHECK(exhausted > 0);  // the budget binds sometimes at M = 32

  // GPRS-limited contingency rule: the budget-th arrival is returned.
  auto w = make_width(fix);
  auto st = solve_stretch(fix, w, 1e7);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto exact = gprs_sample(fix, st, seed);
    auto lim = gprs_limited(fix, st, 16, seed);
    if (exact.steps <= 16) {
      CHECK(lim.sample == exact.sample);
    } else {
      CHECK(lim.exhausted_budget);
      CHECK(lim.selected_index == 16);
      CHECK(lim.sample == arrival_location(SeedStream(seed), 16, fix.proposal));
    }
  }
}

TEST_CASE("astar selection index law matches the conditional-geometric oracle") {
  // N | Y_N is geometric with rate 1 / E_P[max(r(Y_N), r(Y))]; cross-check
  // E[lb N] of the implementation against that law simulated directly.
  const double mi = 4.0;
  const double s2 = std::exp2(2.0 * mi) - 1.0;
  SeedStream s(2468);
  const auto gauss01 = ContinuousDistribution::gaussian(0.0, 1.0);
  const int n_prop = 20000;

  const int n_runs = 4000;
  double sum_impl = 0.0, sum2_impl = 0.0, sum_or = 0.0, sum2_or = 0.0;
  for (int i = 0; i < n_runs; ++i) {
    double x = std::sqrt(s2) * gauss01.quantile(s.next_uniform());
    auto pair = make_awgn_pair(x, s2, 1.0);
    double v = std::log2(
        static_cast<double>(astar_sample(pair, *pair.sup_bound, 880000 + i).selected_index));
    sum_impl += v;
    sum2_impl += v * v;

    // Oracle: one conditional draw of N per x.
    double ups = pair.target.quantile(s.next_uniform());
    double r_ups = pair.ratio(ups);
    double beta = 0.0;
    for (int k = 0; k < n_prop; ++k) {
      double y = pair.proposal.quantile((k + 0.5) / n_prop);
      beta += std::max(r_ups, pair.ratio(y));
    }
    beta /= n_prop;
    double u = s.next_uniform();
    double nn = std::floor(std::log(u) / std::log1p(-1.0 / beta)) + 1.0;
    double w = std::log2(nn);
    sum_or += w;
    sum2_or += w * w;
  }
  double mean_impl = sum_impl / n_runs, mean_or = sum_or / n_runs;
  double se_impl = std::sqrt((sum2_impl / n_runs - mean_impl * mean_impl) / n_runs);
  double se_or = std::sqrt((sum2_or / n_runs - mean_or * mean_or) / n_runs);
  double se = std::sqrt(se_impl * se_impl + se_or * se_or);
  CHECK(std::abs(mean_impl - mean_or) < 3.0 * se);
}

TEST_CASE("budget_for_tv") {
  CHECK(budget_for_tv(2.0, 0.25) == 4096);
  CHECK(budget_for_tv(0.0, 1.0) == 2);
  CHECK_THROWS_WITH_AS(budget_for_tv(2.0, 0.01), doctest::Contains("budget overflow"),
                       std::overflow_error);
}

TEST_CASE("decode_global is index independent in cost") {
  // Covered by the acceptance suite with timing; here just correctness at 10^6.
  auto pair = kAwgn;
  GlobalArrivalGen gen(SeedStream(2024), pair.proposal);
  Arrival a{};
  for (int i = 0; i < 1000; ++i) a = gen.next();
  CHECK(decode_global(2024, 1000, pair.proposal) == a.location);
}

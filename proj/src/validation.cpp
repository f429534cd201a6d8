#include "recsim/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "recsim/bench.hpp"
#include "recsim/bnb.hpp"
#include "recsim/coders.hpp"
#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/samplers.hpp"
#include "recsim/special.hpp"
#include "recsim/stats.hpp"
#include "recsim/stretch.hpp"
#include "recsim/width.hpp"

namespace recsim::validation {

namespace {

using bench::for_each_trial;
using special::kEulerGamma;
using special::kLbE;

struct Ctx {
  Options opt;
  SeedStream root;
  explicit Ctx(const Options& o) : opt(o), root(o.seed) {}
  std::uint64_t run_seed(int criterion, std::uint64_t trial) const {
    return root.fold_in(static_cast<std::uint64_t>(criterion)).fold_in(trial).key();
  }
  std::uint64_t scaled(std::uint64_t n) const { return opt.quick ? std::max<std::uint64_t>(n / 50, 200) : n; }
};

struct Check {
  CriterionResult res;
  explicit Check(int id, std::string name) {
    res.id = id;
    res.name = std::move(name);
    res.pass = true;
  }
  void require(bool ok, const std::string& note) {
    res.pass = res.pass && ok;
    res.notes.push_back((ok ? "ok: " : "FAIL: ") + note);
  }
  void info(const std::string& note) { res.notes.push_back("   " + note); }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

TargetProposalPair awgn_fixture() { return make_awgn_pair(0.0, 3.0, 1.0); }

TargetProposalPair gauss_fixture() {
  return make_pair(ContinuousDistribution::gaussian(1.0, 0.0625),
                   ContinuousDistribution::gaussian(0.0, 1.0));
}

TargetProposalPair identity_fixture() {
  return make_pair(ContinuousDistribution::gaussian(0.0, 1.0),
                   ContinuousDistribution::gaussian(0.0, 1.0));
}

std::vector<double> reference_draws(const TargetProposalPair& pair, std::uint64_t n,
                                    const SeedStream& stream) {
  std::vector<double> out(n);
  for (std::uint64_t i = 0; i < n; ++i)
    out[i] = pair.target.quantile(stream.fold_in(i).uniform_at(0));
  return out;
}

stats::Summary collect(const Ctx& ctx, int crit, std::uint64_t n,
                       const std::function<double(std::uint64_t, std::uint64_t)>& run) {
  std::vector<double> vals(n);
  for_each_trial(n, ctx.opt.workers,
                 [&](std::uint64_t i) { vals[i] = run(i, ctx.run_seed(crit, i)); });
  return stats::summarize(vals);
}

// --------------------------------------------------------------------------
// Criterion 1: geometric runtime law of rejection and A* sampling.
// --------------------------------------------------------------------------
CriterionResult criterion1(const Ctx& ctx) {
  Check c(1, "geometric runtime law (rejection, A*)");
  const auto pair = awgn_fixture();
  const std::uint64_t n = ctx.scaled(100000);
  for (int alg = 0; alg < 2; ++alg) {
    std::vector<double> steps(n);
    for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
      std::uint64_t seed = ctx.run_seed(1, i + (alg ? n : 0));
      steps[i] = static_cast<double>(alg == 0 ? rejection_sample(pair, 2.0, seed).steps
                                              : astar_sample(pair, 2.0, seed).steps);
    });
    auto sum = stats::summarize(steps);
    const char* name = alg == 0 ? "rejection" : "astar";
    c.require(std::abs(sum.mean - 2.0) < 3.0 * sum.se,
              std::string(name) + " mean steps " + fmt(sum.mean) + " within 2 +- 3*" +
                  fmt(sum.se));
    // Chi-square GOF against Geom(1/2) over >= 15 bins.
    const std::size_t bins = 16;
    std::vector<std::uint64_t> counts(bins, 0);
    for (double s : steps) counts[std::min<std::size_t>(static_cast<std::size_t>(s) - 1, bins - 1)]++;
    std::vector<double> probs(bins);
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < bins; ++k) {
      probs[k] = std::pow(0.5, static_cast<double>(k + 1));
      cum += probs[k];
    }
    probs.back() = 1.0 - cum;
    double p = stats::chi2_gof_pvalue(counts, probs);
    c.require(p > 0.001, std::string(name) + " Geom(1/2) GOF p = " + fmt(p) + " > 0.001");
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 2: GPRS sample complexity E[K] = ||r||_inf.
// --------------------------------------------------------------------------
CriterionResult criterion2(const Ctx& ctx) {
  Check c(2, "GPRS sample complexity E[K] = ||r||_inf");
  const std::uint64_t n = ctx.scaled(100000);
  {
    auto pair = awgn_fixture();
    auto st = solve_stretch(pair, width_gaussian(pair), 1e9);
    auto sum = collect(ctx, 2, n, [&](std::uint64_t, std::uint64_t seed) {
      return static_cast<double>(gprs_sample(pair, st, seed).steps);
    });
    c.require(std::abs(sum.mean - 2.0) < 3.0 * sum.se,
              "awgn fixture mean K " + fmt(sum.mean) + " within 2 +- 3*" + fmt(sum.se));
  }
  {
    auto pair = gauss_fixture();
    // Independent numeric oracle for ||r||_inf: grid + golden section, not
    // the closed-form sup bound.
    auto blind = pair;
    blind.sup_bound.reset();
    double sup = std::exp2(renyi_inf(blind));
    auto st = solve_stretch(pair, width_gaussian(pair), 1e9);
    auto sum = collect(ctx, 21, n, [&](std::uint64_t, std::uint64_t seed) {
      return static_cast<double>(gprs_sample(pair, st, seed).steps);
    });
    c.require(std::abs(sum.mean - sup) < 3.0 * sum.se,
              "gauss fixture mean K " + fmt(sum.mean) + " within " + fmt(sup) + " +- 3*" +
                  fmt(sum.se));
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 3: parallel totals E[K] = M + J - 1 and ||r||_inf + J - 1.
// --------------------------------------------------------------------------
CriterionResult criterion3(const Ctx& ctx) {
  Check c(3, "parallel totals M + J - 1");
  const auto pair = awgn_fixture();
  auto st = solve_stretch(pair, width_gaussian(pair), 1e9);
  const std::uint64_t n = ctx.scaled(10000);
  for (std::uint32_t j : {1u, 2u, 4u, 8u}) {
    auto sum_a = collect(ctx, 3, n, [&](std::uint64_t i, std::uint64_t) {
      return static_cast<double>(
          astar_parallel(pair, 2.0, j, ctx.run_seed(3, i * 16 + j)).steps);
    });
    auto sum_g = collect(ctx, 31, n, [&](std::uint64_t i, std::uint64_t) {
      return static_cast<double>(
          gprs_parallel(pair, st, j, ctx.run_seed(31, i * 16 + j)).steps);
    });
    double expect = 2.0 + j - 1.0;
    c.require(std::abs(sum_a.mean - expect) < 3.0 * sum_a.se,
              "astar-par J=" + std::to_string(j) + " mean " + fmt(sum_a.mean) + " ~ " +
                  fmt(expect) + " +- 3*" + fmt(sum_a.se));
    c.require(std::abs(sum_g.mean - expect) < 3.0 * sum_g.se,
              "gprs-par J=" + std::to_string(j) + " mean " + fmt(sum_g.mean) + " ~ " +
                  fmt(expect) + " +- 3*" + fmt(sum_g.se));
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 4: exactness of every exact sampler on three fixtures.
// --------------------------------------------------------------------------
CriterionResult criterion4(const Ctx& ctx) {
  Check c(4, "exactness (KS) of all exact samplers x 3 fixtures");
  const std::uint64_t n = ctx.scaled(10000);
  struct Fixture {
    const char* name;
    TargetProposalPair pair;
  };
  std::vector<Fixture> fixtures = {{"identity", identity_fixture()},
                                   {"awgn", awgn_fixture()},
                                   {"gauss", gauss_fixture()}};
  int fi = 0;
  for (auto& fx : fixtures) {
    ++fi;
    double m = fx.pair.sup_bound.value();
    auto st = solve_stretch(fx.pair, make_width(fx.pair), 1e9);
    auto ref = reference_draws(fx.pair, n, ctx.root.fold_in(4).fold_in(fi));
    struct Alg {
      const char* name;
      std::function<double(std::uint64_t)> run;
    };
    std::vector<Alg> algs = {
        {"rs", [&](std::uint64_t s) { return rejection_sample(fx.pair, m, s).sample; }},
        {"astar", [&](std::uint64_t s) { return astar_sample(fx.pair, m, s).sample; }},
        {"gprs", [&](std::uint64_t s) { return gprs_sample(fx.pair, st, s).sample; }},
        {"astar-par",
         [&](std::uint64_t s) { return astar_parallel(fx.pair, m, 4, s).sample; }},
        {"gprs-par",
         [&](std::uint64_t s) { return gprs_parallel(fx.pair, st, 4, s).sample; }},
        {"bnb-astar", [&](std::uint64_t s) { return bnb_astar(fx.pair, m, s).sample; }},
        {"bnb-gprs", [&](std::uint64_t s) { return bnb_gprs(fx.pair, st, s).sample; }},
    };
    int ai = 0;
    for (auto& alg : algs) {
      ++ai;
      std::vector<double> samples(n);
      for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
        samples[i] = alg.run(ctx.run_seed(400 + 10 * fi + ai, i));
      });
      double p = stats::ks_pvalue(samples, ref);
      c.require(p > 0.001, std::string(alg.name) + " on " + fx.name + ": KS p = " + fmt(p));
    }
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 5: zeta-coded index length of A* and GPRS on the AWGN sweep.
// --------------------------------------------------------------------------
CriterionResult criterion5(const Ctx& ctx) {
  Check c(5, "A*/GPRS codelength I + lb(I+2) + 3");
  bench::SweepConfig cfg;
  cfg.trials = ctx.scaled(1000);
  cfg.seed = ctx.root.fold_in(5).key();
  cfg.mi_grid = {1.0, 4.0, 8.0};
  cfg.algs = {bench::Algorithm::AStar, bench::Algorithm::Gprs};
  cfg.workers = ctx.opt.workers;
  auto rows = bench::run_awgn_sweep(cfg);
  for (const auto& row : rows) {
    double mi = std::stod(row.setting.substr(3));
    double bound = mi + std::log2(mi + 2.0) + 3.0;
    c.require(row.bits.mean <= bound + 0.2,
              row.algorithm + " @ mi=" + fmt(mi) + ": mean bits " + fmt(row.bits.mean) +
                  " <= " + fmt(bound) + " + 0.2");
    if (mi == 4.0) {
      bool within = row.bits.mean >= bound - 1.5;
      c.require(within, row.algorithm + " @ mi=4: mean bits " + fmt(row.bits.mean) +
                            " within 1.5 of the bound " + fmt(bound));
      if (!within)
        c.info(
            "the index law matches the conditional-geometric characterisation "
            "(see the sampler test suite); the exact-rational coder averages "
            "~1 bit over the ideal length where the bound budgets 2, leaving "
            "the codelength bound ~2 bits loose at mi=4");
    }
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criteria 6 and 7: branch-and-bound runtime and self-information bounds.
// --------------------------------------------------------------------------
void bnb_grid(const Ctx& ctx, Check& c6, Check& c7) {
  const std::uint64_t n = ctx.scaled(10000);
  // A* grid: lb M in [0.5, 10] via AWGN pairs at x = 0.
  for (double lbm : {0.5, 2.0, 4.0, 6.0, 8.0, 10.0}) {
    double s2 = std::exp2(2.0 * lbm) - 1.0;
    auto pair = make_awgn_pair(0.0, s2, 1.0);
    double dkl = kl_divergence(pair);
    std::vector<double> steps(n), nlb(n);
    for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
      auto r = bnb_astar(pair, *pair.sup_bound, ctx.run_seed(600 + int(lbm * 2), i));
      steps[i] = static_cast<double>(r.steps);
      nlb[i] = -std::log2(r.bound_mass);
    });
    auto ssum = stats::summarize(steps);
    auto bsum = stats::summarize(nlb);
    double bound = (lbm + 2.0) / (kLbE - 1.0);
    c6.require(ssum.mean <= bound && ssum.mean >= 1.0,
               "bnb-astar lbM=" + fmt(lbm) + ": mean steps " + fmt(ssum.mean) + " in [1, " +
                   fmt(bound) + "]");
    c7.require(bsum.mean <= dkl + 3.0 * bsum.se,
               "bnb-astar lbM=" + fmt(lbm) + ": mean -lb P(B) " + fmt(bsum.mean) +
                   " <= D_KL " + fmt(dkl) + " + 3*" + fmt(bsum.se));
  }
  // GPRS grid: D_KL in [0.5, 10] via fixed-KL pairs.
  for (double dkl : {0.5, 2.0, 4.0, 6.0, 8.0, 10.0}) {
    auto pair = make_fixed_kl_pair(dkl, dkl + 3.0);
    auto st = solve_stretch(pair, make_width(pair), 1e10);
    std::vector<double> steps(n), nlb(n);
    for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
      auto r = bnb_gprs(pair, st, ctx.run_seed(700 + int(dkl * 2), i));
      steps[i] = static_cast<double>(r.steps);
      nlb[i] = -std::log2(r.bound_mass);
    });
    auto ssum = stats::summarize(steps);
    auto bsum = stats::summarize(nlb);
    double bound = (dkl + 2.0 + (1.0 + kEulerGamma) * kLbE) / (kLbE - 1.0);
    c6.require(ssum.mean <= bound && ssum.mean >= 1.0,
               "bnb-gprs dkl=" + fmt(dkl) + ": mean steps " + fmt(ssum.mean) + " in [1, " +
                   fmt(bound) + "]");
    c7.require(bsum.mean <= dkl + (1.0 + kEulerGamma) * kLbE + 3.0 * bsum.se,
               "bnb-gprs dkl=" + fmt(dkl) + ": mean -lb P(B) " + fmt(bsum.mean) + " <= " +
                   fmt(dkl + (1.0 + kEulerGamma) * kLbE) + " + 3*" + fmt(bsum.se));
  }
}

// --------------------------------------------------------------------------
// Criterion 8: panel-C contrast on the fixed-KL sweep.
// --------------------------------------------------------------------------
CriterionResult criterion8(const Ctx& ctx) {
  Check c(8, "panel-C contrast: GPRS flat, A* grows");
  bench::SweepConfig cfg;
  cfg.trials = ctx.scaled(1000);
  cfg.seed = ctx.root.fold_in(8).key();
  cfg.kappa = 2.0;
  cfg.delta_grid = {2.0, 5.0, 10.0, 15.0, 20.0, 25.0};
  cfg.algs = {bench::Algorithm::BnbAStar, bench::Algorithm::BnbGprs};
  cfg.workers = ctx.opt.workers;
  auto rows = bench::run_fixedkl_sweep(cfg);

  // delta = 2 is below the Gaussian feasibility boundary (~2.7044 bits for
  // kappa = 2); the sweep must report it infeasible rather than fake stats.
  int infeasible_markers = 0;
  std::vector<std::pair<double, double>> gprs, astar;
  for (const auto& row : rows) {
    double delta = std::stod(row.setting.substr(6));
    if (row.skipped == "infeasible") {
      ++infeasible_markers;
      c.require(delta == 2.0, "infeasible marker only at delta=2 (got delta=" + fmt(delta) + ")");
      continue;
    }
    if (row.algorithm == "bnb-gprs") gprs.emplace_back(delta, row.steps.mean);
    else astar.emplace_back(delta, row.steps.mean);
  }
  c.require(infeasible_markers == 2, "delta=2 reported infeasible for both algorithms");
  double gmin = 1e300, gmax = -1e300, a5 = 0.0, a25 = 0.0;
  for (auto& [d, m] : gprs) {
    gmin = std::min(gmin, m);
    gmax = std::max(gmax, m);
  }
  for (auto& [d, m] : astar) {
    if (d == 5.0) a5 = m;
    if (d == 25.0) a25 = m;
  }
  c.require(gmax - gmin <= 2.0, "GPRS mean-steps range " + fmt(gmax - gmin) + " <= 2.0");
  c.require(a25 >= 2.0 * a5,
            "A* mean steps at delta=25 (" + fmt(a25) + ") >= 2x delta=5 (" + fmt(a5) + ")");
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 9: step-limited TV budget and limited == exact agreement.
// --------------------------------------------------------------------------
CriterionResult criterion9(const Ctx& ctx) {
  Check c(9, "step-limited TV budget");
  auto pair = make_fixed_kl_pair(2.0, 10.0);
  const std::uint64_t m = budget_for_tv(2.0, 0.25);
  c.require(m == 4096, "budget_for_tv(2, 0.25) = 4096");
  const std::uint64_t n = ctx.scaled(100000);
  const double bound_m = std::exp2(10.0);
  auto st = solve_stretch(pair, make_width(pair), 1e10);

  // 64 equal-mass bins under the target.
  std::vector<double> edges(63);
  for (int k = 1; k < 64; ++k) edges[k - 1] = pair.target.quantile(k / 64.0);
  auto tv64 = [&](const std::vector<double>& xs) {
    std::vector<double> counts(64, 0.0);
    for (double x : xs) {
      std::size_t b = std::upper_bound(edges.begin(), edges.end(), x) - edges.begin();
      counts[b] += 1.0;
    }
    double tv = 0.0;
    for (double cnt : counts) tv += std::abs(cnt / xs.size() - 1.0 / 64.0);
    return 0.5 * tv;
  };
  const double tol = 0.25 + 3.0 * std::sqrt(64.0 / static_cast<double>(n));

  for (int alg = 0; alg < 2; ++alg) {
    std::vector<double> limited(n);
    std::vector<std::uint8_t> agree(n, 1), exhausted(n, 0);
    for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
      std::uint64_t seed = ctx.run_seed(900 + alg, i);
      RunResult lim = alg == 0 ? astar_limited(pair, bound_m, m, seed)
                               : gprs_limited(pair, st, m, seed);
      limited[i] = lim.sample;
      exhausted[i] = lim.exhausted_budget;
      if (!lim.exhausted_budget) {
        RunResult exact =
            alg == 0 ? astar_sample(pair, bound_m, seed) : gprs_sample(pair, st, seed);
        agree[i] = lim.sample == exact.sample && lim.selected_index == exact.selected_index;
      }
    });
    std::uint64_t disagreements = static_cast<std::uint64_t>(
        std::count(agree.begin(), agree.end(), static_cast<std::uint8_t>(0)));
    std::uint64_t exh = static_cast<std::uint64_t>(
        std::count(exhausted.begin(), exhausted.end(), static_cast<std::uint8_t>(1)));
    double tv = tv64(limited);
    const char* name = alg == 0 ? "astar-lim" : "gprs-lim";
    c.require(disagreements == 0,
              std::string(name) + ": limited == exact on all non-exhausted seeds (" +
                  std::to_string(exh) + " exhausted)");
    c.require(tv <= tol, std::string(name) + " binned TV " + fmt(tv) + " <= " + fmt(tol));
  }
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 10: divergence numerics.
// --------------------------------------------------------------------------
CriterionResult criterion10(const Ctx&) {
  Check c(10, "divergence numerics");
  for (double s : {0.2, 0.5, 0.8}) {
    double closed = (s + special::digamma(1.0 / s) + kEulerGamma - 1.0) * kLbE;
    auto pair = make_pair(ContinuousDistribution::laplace(0.0, s),
                          ContinuousDistribution::laplace(0.0, 1.0));
    double quadv = csd(pair, 1e-9);
    c.require(std::abs(quadv - closed) < 1e-6,
              "laplace s=" + fmt(s) + ": |csd - closed| = " + fmt(std::abs(quadv - closed)));
  }
  // Sandwich on 40 mixed pairs.
  bool sandwich = true;
  for (int i = 0; i < 20; ++i) {
    auto p = make_pair(ContinuousDistribution::gaussian(-1.5 + 0.15 * i, 0.05 + 0.045 * i),
                       ContinuousDistribution::gaussian(0, 1));
    double dkl = kl_divergence(p), dcs = csd(p, 1e-8);
    sandwich = sandwich && dkl <= dcs + 1e-9 && dcs <= dkl + std::log2(dkl + 1.0) + 1.0 + 1e-9;
  }
  for (int i = 0; i < 20; ++i) {
    auto p = make_pair(ContinuousDistribution::laplace(-1.0 + 0.1 * i, 0.1 + 0.04 * i),
                       ContinuousDistribution::laplace(0, 1));
    double dkl = kl_divergence(p), dcs = csd(p, 1e-8);
    sandwich = sandwich && dkl <= dcs + 1e-9 && dcs <= dkl + std::log2(dkl + 1.0) + 1.0 + 1e-9;
  }
  c.require(sandwich, "KL <= CS <= KL + lb(KL+1) + 1 on 40 mixed pairs");

  std::vector<double> lbd, gap;
  for (int d : {1, 2, 4, 8, 16, 32, 64}) {
    lbd.push_back(std::log2(static_cast<double>(d)));
    gap.push_back(csd_gap_product_gaussian(1.0, 0.25, d));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lbd.size(); ++i) {
    sx += lbd[i];
    sy += gap[i];
    sxx += lbd[i] * lbd[i];
    sxy += lbd[i] * gap[i];
  }
  double nn = static_cast<double>(lbd.size());
  double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  c.require(slope >= 0.4 && slope <= 0.6, "product-Gaussian gap slope " + fmt(slope));
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 11: coding round trips and the sorted-uniform rate.
// --------------------------------------------------------------------------
CriterionResult criterion11(const Ctx& ctx) {
  Check c(11, "coding round trips and sorted-uniform rate");
  const std::uint64_t cases = ctx.scaled(1000);
  SeedStream s11 = ctx.root.fold_in(11);

  // Zeta and Elias gamma.
  ZetaCoder zc(1.37, 1 << 24);
  bool ok = true;
  for (std::uint64_t i = 0; i < cases; ++i) {
    std::uint64_t n = 1 + (s11.fold_in(i).word(0) % (1 << 24));
    auto bits = zc.encode(n);
    BitReader r(bits);
    ok = ok && zc.decode(r) == n && r.position() == bits.size();
    auto gb = elias_gamma_encode(n);
    BitReader gr(gb);
    ok = ok && elias_gamma_decode(gr) == n;
  }
  c.require(ok, "zeta + elias gamma round trips on " + std::to_string(cases) + " cases");

  // Heap-path, full two-part BnB code and sorted-uniform round trips.
  auto pair = gauss_fixture();
  auto st = solve_stretch(pair, width_gaussian(pair), 1e9);
  double dkl = kl_divergence(pair);
  double alpha = 1.0 + 1.0 / ((dkl + 2.0 + (1.0 + kEulerGamma) * kLbE) / (kLbE - 1.0) + 2.0);
  bool ok_bnb = true, ok_path = true;
  for (std::uint64_t i = 0; i < cases; ++i) {
    std::uint64_t seed = ctx.run_seed(11, i);
    auto run = bnb_gprs(pair, st, seed);
    auto code = encode_bnb_run(run, alpha);
    BitReader r(code);
    auto dec = decode_bnb_run(r, pair, seed, alpha);
    ok_bnb = ok_bnb && dec.sample == run.sample && dec.path_bits == run.path_bits;

    std::vector<double> fr(run.per_step_fraction.begin(),
                           run.per_step_fraction.begin() + run.accept_depth);
    auto pc = encode_heap_path(fr, run.path_bits);
    double ideal = 0.0;
    for (double f : fr) ideal -= std::log2(f);
    ok_path = ok_path && static_cast<double>(pc.size()) <= ideal + 2.0 + 1e-6;
  }
  c.require(ok_bnb, "two-part bnb code round trips");
  c.require(ok_path, "heap-path code length <= -sum lb fraction + 2");

  // Sorted-uniform on the AWGN MI=1 fixture: round trips + rate bound.
  const std::uint64_t n = ctx.scaled(10000);
  const double mi = 1.0;
  const auto gauss01 = ContinuousDistribution::gaussian(0.0, 1.0);
  std::vector<double> bits(n), ks(n);
  std::vector<std::uint8_t> okv(n, 0);
  for_each_trial(n, ctx.opt.workers, [&](std::uint64_t i) {
    SeedStream ts = ctx.root.fold_in(911).fold_in(i);
    double x = std::sqrt(3.0) * gauss01.quantile(ts.uniform_at(0));
    auto p = make_awgn_pair(x, 3.0, 1.0);
    std::uint64_t seed = ts.fold_in(1).key();
    auto rr = rejection_sample(p, *p.sup_bound, seed);
    auto code = sorted_uniform_encode(seed, p, *p.sup_bound, mi);
    BitReader r(code.bits);
    auto dec = sorted_uniform_decode(r, seed, p, mi);
    okv[i] = dec.sample == rr.sample && dec.index == rr.selected_index;
    bits[i] = static_cast<double>(code.bits.size());
    ks[i] = static_cast<double>(rr.steps);
  });
  bool all_ok = std::all_of(okv.begin(), okv.end(), [](std::uint8_t v) { return v == 1; });
  c.require(all_ok, "sorted-uniform decodes bit-identically on the AWGN fixture");
  auto bsum = stats::summarize(bits);
  auto ksum = stats::summarize(ks);
  double rate_bound =
      mi + std::log2(mi + 1.0) + 2.0 * std::log2(std::log2(ksum.mean) + 1.0) + 8.31;
  c.require(bsum.mean <= rate_bound, "sorted-uniform mean rate " + fmt(bsum.mean) +
                                         " <= " + fmt(rate_bound) +
                                         " (C' = " + fmt(ksum.mean) + ")");
  return c.res;
}

// --------------------------------------------------------------------------
// Criterion 12: decodability and O(1) / O(depth) decode cost.
// --------------------------------------------------------------------------
CriterionResult criterion12(const Ctx& ctx) {
  Check c(12, "decodability and decode timing");
  auto pair = awgn_fixture();
  bool ok = true;
  for (std::uint64_t i = 0; i < ctx.scaled(1000); ++i) {
    std::uint64_t seed = ctx.run_seed(12, i);
    auto r = astar_sample(pair, 2.0, seed);
    ok = ok && decode_global(seed, r.selected_index, pair.proposal) == r.sample;
  }
  c.require(ok, "decode_global reproduces encoder samples");

  auto gpair = gauss_fixture();
  auto st = solve_stretch(gpair, width_gaussian(gpair), 1e9);
  bool okb = true;
  for (std::uint64_t i = 0; i < ctx.scaled(1000); ++i) {
    std::uint64_t seed = ctx.run_seed(121, i);
    auto r = bnb_gprs(gpair, st, seed);
    okb = okb && decode_bnb(seed, r.accept_depth, r.path_bits, gpair) == r.sample;
  }
  c.require(okb, "decode_bnb reproduces encoder samples");

  // Wall time of decode_global is index independent: median over batches.
  auto time_decode = [&](std::uint64_t index) {
    std::vector<double> times;
    volatile double sink = 0.0;
    for (int rep = 0; rep < 7; ++rep) {
      auto t0 = std::chrono::steady_clock::now();
      for (int k = 0; k < 20000; ++k) sink = decode_global(999, index, pair.proposal);
      auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    (void)sink;
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };
  double t1 = time_decode(1);
  double t1m = time_decode(1000000);
  c.require(t1m <= 10.0 * t1,
            "decode_global at n=1e6 takes " + fmt(t1m / t1) + "x the n=1 time (<= 10x)");
  return c.res;
}

}  // namespace

CriterionResult run_criterion(int id, const Options& options) {
  Ctx ctx(options);
  switch (id) {
    case 1: return criterion1(ctx);
    case 2: return criterion2(ctx);
    case 3: return criterion3(ctx);
    case 4: return criterion4(ctx);
    case 5: return criterion5(ctx);
    case 6:
    case 7: {
      Check c6(6, "bnb runtime bounds"), c7(7, "bnb self-information bounds");
      bnb_grid(ctx, c6, c7);
      return id == 6 ? c6.res : c7.res;
    }
    case 8: return criterion8(ctx);
    case 9: return criterion9(ctx);
    case 10: return criterion10(ctx);
    case 11: return criterion11(ctx);
    case 12: return criterion12(ctx);
    default: throw std::invalid_argument("unknown criterion id");
  }
}

std::vector<CriterionResult> run_all(const Options& options) {
  Ctx ctx(options);
  std::vector<CriterionResult> out;
  out.push_back(criterion1(ctx));
  out.push_back(criterion2(ctx));
  out.push_back(criterion3(ctx));
  out.push_back(criterion4(ctx));
  out.push_back(criterion5(ctx));
  {
    Check c6(6, "bnb runtime bounds"), c7(7, "bnb self-information bounds");
    bnb_grid(ctx, c6, c7);
    out.push_back(c6.res);
    out.push_back(c7.res);
  }
  out.push_back(criterion8(ctx));
  out.push_back(criterion9(ctx));
  out.push_back(criterion10(ctx));
  out.push_back(criterion11(ctx));
  out.push_back(criterion12(ctx));
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CriterionResult& r) { return r.pass; });
}

std::string to_json(const std::vector<CriterionResult>& results) {
  nlohmann::json j;
  j["pass"] = all_pass(results);
  j["criteria"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["pass"] = r.pass;
    c["checks"] = r.notes;
    j["criteria"].push_back(c);
  }
  return j.dump(2);
}

}  // namespace recsim::validation

#include "recsim/bench.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "recsim/bnb.hpp"
#include "recsim/coders.hpp"
#include "recsim/distributions.hpp"
#include "recsim/divergences.hpp"
#include "recsim/samplers.hpp"
#include "recsim/special.hpp"
#include "recsim/stretch.hpp"
#include "recsim/width.hpp"

namespace recsim::bench {

namespace {

using special::kEulerGamma;
using special::kLbE;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct TrialOutcome {
  double steps = kNan;
  double bits = kNan;
};

bool needs_stretch(Algorithm alg) {
  return alg == Algorithm::Gprs || alg == Algorithm::GprsPar || alg == Algorithm::GprsLim ||
         alg == Algorithm::BnbGprs;
}

// Raw bits for a thread id in [1, J]: ceil(lb J) fixed-width bits.
double thread_tag_bits(std::uint32_t j_threads) {
  if (j_threads <= 1) return 0.0;
  return std::ceil(std::log2(static_cast<double>(j_threads)));
}

}  // namespace

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::RS: return "rs";
    case Algorithm::AStar: return "astar";
    case Algorithm::Gprs: return "gprs";
    case Algorithm::BnbAStar: return "bnb-astar";
    case Algorithm::BnbGprs: return "bnb-gprs";
    case Algorithm::AStarPar: return "astar-par";
    case Algorithm::GprsPar: return "gprs-par";
    case Algorithm::AStarLim: return "astar-lim";
    case Algorithm::GprsLim: return "gprs-lim";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::RS, Algorithm::AStar, Algorithm::Gprs, Algorithm::BnbAStar,
                      Algorithm::BnbGprs, Algorithm::AStarPar, Algorithm::GprsPar,
                      Algorithm::AStarLim, Algorithm::GprsLim})
    if (to_string(a) == name) return a;
  throw std::invalid_argument("unknown algorithm: " + name);
}

std::vector<Algorithm> parse_algorithms(const std::string& csv) {
  std::vector<Algorithm> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_algorithm(item));
  }
  if (out.empty()) throw std::invalid_argument("empty algorithm list");
  return out;
}

bool is_general_sampler(Algorithm alg) {
  return alg != Algorithm::BnbAStar && alg != Algorithm::BnbGprs;
}

int resolve_workers(int requested) {
  int n = requested > 0 ? requested : omp_get_max_threads();
  if (const char* cap = std::getenv("RECSIM_THREADS")) {
    int c = std::atoi(cap);
    if (c > 0 && c < n) n = c;
  }
  return n < 1 ? 1 : n;
}

void for_each_trial(std::uint64_t n, int workers,
                    const std::function<void(std::uint64_t)>& body) {
  const int w = resolve_workers(workers);
  if (w == 1) {
    for (std::uint64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16) num_threads(w)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      body(static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

namespace {

StatRow make_row(const std::string& setting, Algorithm alg,
                 const std::vector<TrialOutcome>& outcomes) {
  StatRow row;
  row.setting = setting;
  row.algorithm = to_string(alg);
  row.trials = outcomes.size();
  std::vector<double> steps, bits;
  steps.reserve(outcomes.size());
  bits.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    steps.push_back(o.steps);
    bits.push_back(o.bits);
  }
  row.steps = stats::summarize(steps);
  row.bits = stats::summarize(bits);
  return row;
}

StatRow skipped_row(const std::string& setting, Algorithm alg, const std::string& reason) {
  StatRow row;
  row.setting = setting;
  row.algorithm = to_string(alg);
  row.trials = 0;
  row.skipped = reason;
  return row;
}

std::string fmt_setting(const char* key, double v) {
  std::ostringstream os;
  os << key << "=" << v;
  return os.str();
}

}  // namespace

std::vector<StatRow> run_awgn_sweep(const SweepConfig& config) {
  if (config.mi_grid.empty()) throw std::invalid_argument("awgn sweep: empty MI grid");
  if (config.trials < 1) throw std::invalid_argument("awgn sweep: trials must be >= 1");
  for (double mi : config.mi_grid)
    if (!(mi > 0.0 && mi <= 16.0)) throw std::invalid_argument("awgn sweep: infeasible MI grid");
  const auto algs = config.algs.empty()
                        ? std::vector<Algorithm>{Algorithm::AStar, Algorithm::Gprs,
                                                 Algorithm::BnbAStar, Algorithm::BnbGprs}
                        : config.algs;

  std::vector<StatRow> rows;
  SeedStream root(config.seed);
  const auto gauss01 = ContinuousDistribution::gaussian(0.0, 1.0);

  for (std::size_t si = 0; si < config.mi_grid.size(); ++si) {
    const double mi = config.mi_grid[si];
    const double sigma2 = std::exp2(2.0 * mi) - 1.0;
    const std::string setting = fmt_setting("mi", mi);
    const SeedStream setting_stream = root.fold_in(si);
    // Zeta exponent for global indices, and the per-sweep depth exponents of
    // the two-part code, all from the analytic per-setting values.
    const double alpha_global = 1.0 + 1.0 / (mi + 1.0);
    const double mean_lbm = mi + 0.5 * kLbE;  // E_x[lb ||r_x||_inf]
    const double alpha_bnb_astar = 1.0 + 1.0 / ((mean_lbm + 2.0) / (kLbE - 1.0) + 2.0);
    const double alpha_bnb_gprs =
        1.0 + 1.0 / ((mi + 2.0 + (1.0 + kEulerGamma) * kLbE) / (kLbE - 1.0) + 2.0);

    for (Algorithm alg : algs) {
      if (is_general_sampler(alg) && mi > config.mi_cap) {
        rows.push_back(skipped_row(setting, alg, "runtime"));
        continue;
      }
      const ZetaCoder global_coder(alpha_global);
      std::vector<TrialOutcome> outcomes(config.trials);
      for_each_trial(config.trials, config.workers, [&](std::uint64_t t) {
        SeedStream trial_stream = setting_stream.fold_in(t);
        const double x = std::sqrt(sigma2) * gauss01.quantile(trial_stream.uniform_at(0));
        const std::uint64_t run_seed = trial_stream.fold_in(1).key();
        auto pair = make_awgn_pair(x, sigma2, 1.0);
        TrialOutcome out;
        switch (alg) {
          case Algorithm::RS: {
            auto r = rejection_sample(pair, *pair.sup_bound, run_seed);
            out.steps = static_cast<double>(r.steps);
            out.bits = static_cast<double>(global_coder.encode(r.selected_index).size());
            break;
          }
          case Algorithm::AStar: {
            auto r = astar_sample(pair, *pair.sup_bound, run_seed);
            out.steps = static_cast<double>(r.steps);
            out.bits = static_cast<double>(global_coder.encode(r.selected_index).size());
            break;
          }
          case Algorithm::AStarPar: {
            auto r = astar_parallel(pair, *pair.sup_bound, config.par_threads, run_seed);
            out.steps = static_cast<double>(r.steps);
            out.bits = static_cast<double>(global_coder.encode(r.thread_tag->second).size()) +
                       thread_tag_bits(config.par_threads);
            break;
          }
          case Algorithm::AStarLim: {
            auto budget = budget_for_tv(kl_divergence(pair), config.limit_eps);
            auto r = astar_limited(pair, *pair.sup_bound, budget, run_seed);
            out.steps = static_cast<double>(r.steps);
            out.bits = static_cast<double>(global_coder.encode(r.selected_index).size());
            break;
          }
          case Algorithm::BnbAStar: {
            auto r = bnb_astar(pair, *pair.sup_bound, run_seed);
            out.steps = static_cast<double>(r.steps);
            out.bits = static_cast<double>(encode_bnb_run(r, alpha_bnb_astar).size());
            break;
          }
          case Algorithm::Gprs:
          case Algorithm::GprsPar:
          case Algorithm::GprsLim:
          case Algorithm::BnbGprs: {
            auto width = width_gaussian(pair);
            auto stretch = solve_stretch(pair, width, 1e13, 1e-8);
            if (alg == Algorithm::Gprs) {
              auto r = gprs_sample(pair, stretch, run_seed);
              out.steps = static_cast<double>(r.steps);
              out.bits = static_cast<double>(global_coder.encode(r.selected_index).size());
            } else if (alg == Algorithm::GprsPar) {
              auto r = gprs_parallel(pair, stretch, config.par_threads, run_seed);
              out.steps = static_cast<double>(r.steps);
              out.bits =
                  static_cast<double>(global_coder.encode(r.thread_tag->second).size()) +
                  thread_tag_bits(config.par_threads);
            } else if (alg == Algorithm::GprsLim) {
              auto budget = budget_for_tv(kl_divergence(pair), config.limit_eps);
              auto r = gprs_limited(pair, stretch, budget, run_seed);
              out.steps = static_cast<double>(r.steps);
              out.bits = static_cast<double>(global_coder.encode(r.selected_index).size());
            } else {
              auto r = bnb_gprs(pair, stretch, run_seed);
              out.steps = static_cast<double>(r.steps);
              out.bits = static_cast<double>(encode_bnb_run(r, alpha_bnb_gprs).size());
            }
            break;
          }
        }
        outcomes[t] = out;
      });
      rows.push_back(make_row(setting, alg, outcomes));
    }
  }
  return rows;
}

std::vector<StatRow> run_fixedkl_sweep(const SweepConfig& config) {
  if (config.delta_grid.empty()) throw std::invalid_argument("fixedkl sweep: empty delta grid");
  const auto algs = config.algs.empty()
                        ? std::vector<Algorithm>{Algorithm::BnbAStar, Algorithm::BnbGprs}
                        : config.algs;
  std::vector<StatRow> rows;
  SeedStream root(config.seed);
  const double kappa = config.kappa;
  const double alpha_bnb_gprs =
      1.0 + 1.0 / ((kappa + 2.0 + (1.0 + kEulerGamma) * kLbE) / (kLbE - 1.0) + 2.0);

  for (std::size_t si = 0; si < config.delta_grid.size(); ++si) {
    const double delta = config.delta_grid[si];
    const std::string setting = fmt_setting("delta", delta);
    const SeedStream setting_stream = root.fold_in(1000 + si);

    bool feasible = true;
    TargetProposalPair pair = make_pair(ContinuousDistribution::gaussian(0, 1),
                                        ContinuousDistribution::gaussian(0, 1));
    try {
      pair = make_fixed_kl_pair(kappa, delta);
    } catch (const std::domain_error&) {
      feasible = false;
    }
    if (!feasible) {
      for (Algorithm alg : algs) rows.push_back(skipped_row(setting, alg, "infeasible"));
      continue;
    }
    const double bound_m = std::exp2(delta);
    const double alpha_bnb_astar = 1.0 + 1.0 / ((delta + 2.0) / (kLbE - 1.0) + 2.0);
    StretchFunction stretch;
    bool have_stretch = false;
    for (Algorithm alg : algs) {
      if (needs_stretch(alg) && !have_stretch) {
        stretch = solve_stretch(pair, make_width(pair), 1e13, 1e-8);
        have_stretch = true;
      }
      std::vector<TrialOutcome> outcomes(config.trials);
      for_each_trial(config.trials, config.workers, [&](std::uint64_t t) {
        const std::uint64_t run_seed = setting_stream.fold_in(t).key();
        TrialOutcome out;
        if (alg == Algorithm::BnbAStar) {
          auto r = bnb_astar(pair, bound_m, run_seed);
          out.steps = static_cast<double>(r.steps);
          out.bits = static_cast<double>(encode_bnb_run(r, alpha_bnb_astar).size());
        } else if (alg == Algorithm::BnbGprs) {
          auto r = bnb_gprs(pair, stretch, run_seed);
          out.steps = static_cast<double>(r.steps);
          out.bits = static_cast<double>(encode_bnb_run(r, alpha_bnb_gprs).size());
        } else {
          throw std::invalid_argument("fixedkl sweep supports bnb-astar and bnb-gprs");
        }
        outcomes[t] = out;
      });
      rows.push_back(make_row(setting, alg, outcomes));
    }
  }
  return rows;
}

std::vector<DivRow> run_divergence_report(const DivergenceConfig& config) {
  std::vector<DivRow> rows;
  auto sandwich_upper = [](double dkl) { return dkl + std::log2(dkl + 1.0) + 1.0; };

  for (double lnb : config.laplace_minus_ln_b) {
    DivRow row;
    double b = std::exp(-lnb);
    row.setting = fmt_setting("laplace_lnb", lnb);
    auto pair = make_pair(ContinuousDistribution::laplace(0.0, b),
                          ContinuousDistribution::laplace(0.0, 1.0));
    row.dkl = kl_divergence(pair);
    row.dcs_closed =
        b >= 1.0 ? 0.0 : (b + special::digamma(1.0 / b) + kEulerGamma - 1.0) * kLbE;
    try {
      row.dcs = csd(pair, config.quad_tol);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.dcs = kNan;
    }
    row.upper = sandwich_upper(row.dkl);
    row.gap = row.dcs - row.dkl;
    rows.push_back(row);
  }
  for (int d : config.gauss_dims) {
    DivRow row;
    row.setting = fmt_setting("gauss_d", d);
    double dkl1 = kl_divergence(make_pair(ContinuousDistribution::gaussian(1.0, 0.25),
                                          ContinuousDistribution::gaussian(0.0, 1.0)));
    row.dkl = d * dkl1;
    row.dcs_closed = kNan;
    try {
      row.gap = csd_gap_product_gaussian(1.0, 0.25, d, config.quad_tol);
      row.dcs = row.dkl + row.gap;
    } catch (const std::exception& e) {
      row.error = e.what();
      row.dcs = row.gap = kNan;
    }
    row.upper = sandwich_upper(row.dkl);
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string csv_header_comment(bool deterministic) {
  if (deterministic) return "";
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("# generated ") + buf + "\n";
}

void append_number(std::ostringstream& os, double v) {
  if (std::isnan(v)) return;  // empty field
  os.precision(12);
  os << v;
}

}  // namespace

std::string to_csv(const std::vector<StatRow>& rows, bool deterministic) {
  std::ostringstream os;
  os << csv_header_comment(deterministic);
  os << "setting,algorithm,trials,steps_mean,steps_se,steps_median,steps_q25,steps_q75,"
        "bits_mean,bits_se,bits_median,bits_q25,bits_q75,skipped_reason\n";
  for (const auto& r : rows) {
    os << r.setting << "," << r.algorithm << "," << r.trials << ",";
    if (r.trials > 0) {
      for (double v : {r.steps.mean, r.steps.se, r.steps.median, r.steps.q25, r.steps.q75,
                       r.bits.mean, r.bits.se, r.bits.median, r.bits.q25, r.bits.q75}) {
        append_number(os, v);
        os << ",";
      }
    } else {
      os << ",,,,,,,,,,";
    }
    os << r.skipped << "\n";
  }
  return os.str();
}

std::string to_csv(const std::vector<DivRow>& rows, bool deterministic) {
  std::ostringstream os;
  os << csv_header_comment(deterministic);
  os << "setting,dkl_bits,dcs_bits,dcs_closed_bits,upper_bits,gap_bits,error\n";
  for (const auto& r : rows) {
    os << r.setting << ",";
    append_number(os, r.dkl);
    os << ",";
    append_number(os, r.dcs);
    os << ",";
    append_number(os, r.dcs_closed);
    os << ",";
    append_number(os, r.upper);
    os << ",";
    append_number(os, r.gap);
    os << "," << r.error << "\n";
  }
  return os.str();
}

}  // namespace recsim::bench

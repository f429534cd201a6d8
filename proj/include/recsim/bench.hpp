#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "recsim/stats.hpp"

namespace recsim::bench {

enum class Algorithm {
  RS,
  AStar,
  Gprs,
  BnbAStar,
  BnbGprs,
  AStarPar,
  GprsPar,
  AStarLim,
  GprsLim,
};

std::string to_string(Algorithm alg);
Algorithm parse_algorithm(const std::string& name);
std::vector<Algorithm> parse_algorithms(const std::string& csv);  // "gprs,bnb-gprs"
bool is_general_sampler(Algorithm alg);  // subject to the runtime cap

struct SweepConfig {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0xC0FFEE;
  std::vector<Algorithm> algs;
  // AWGN sweep: mutual-information grid in bits, rho^2 fixed at 1.
  std::vector<double> mi_grid;
  double mi_cap = 8.0;  // general samplers are skipped above this
  // Fixed-KL sweep.
  double kappa = 2.0;
  std::vector<double> delta_grid;
  // Parallel / limited variant parameters.
  std::uint32_t par_threads = 4;
  double limit_eps = 0.25;  // budget = ceil(2^((kl+1)/eps))
  // Execution.
  int workers = 0;  // 0 = all available, 1 = serial reference
};

struct StatRow {
  std::string setting;
  std::string algorithm;
  std::uint64_t trials = 0;
  stats::Summary steps;
  stats::Summary bits;
  std::string skipped;  // empty, "runtime" or "infeasible"
};

std::vector<StatRow> run_awgn_sweep(const SweepConfig& config);
std::vector<StatRow> run_fixedkl_sweep(const SweepConfig& config);

struct DivergenceConfig {
  std::vector<double> laplace_minus_ln_b;  // panel A grid
  std::vector<int> gauss_dims;             // panel B grid
  double quad_tol = 1e-8;
};

struct DivRow {
  std::string setting;
  double dkl = 0.0;
  double dcs = 0.0;
  double dcs_closed = 0.0;  // NaN when no closed form exists
  double upper = 0.0;       // D_KL + lb(D_KL + 1) + 1
  double gap = 0.0;         // D_CS - D_KL
  std::string error;
};

std::vector<DivRow> run_divergence_report(const DivergenceConfig& config);

// CSV emission. The schema is normative:
// setting,algorithm,trials,steps_mean,steps_se,steps_median,steps_q25,steps_q75,
// bits_mean,bits_se,bits_median,bits_q25,bits_q75,skipped_reason
std::string to_csv(const std::vector<StatRow>& rows, bool deterministic);
std::string to_csv(const std::vector<DivRow>& rows, bool deterministic);

// Runs body(0..n-1) with OpenMP sharding (workers = 1 is the serial
// reference path; 0 uses all cores, capped by RECSIM_THREADS). Bodies must
// only write to per-index state, which keeps the output independent of the
// worker count.
void for_each_trial(std::uint64_t n, int workers,
                    const std::function<void(std::uint64_t)>& body);
int resolve_workers(int requested);

}  // namespace recsim::bench

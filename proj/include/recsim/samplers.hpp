#pragma once

#include <cstdint>
#include <optional>

#include "recsim/distributions.hpp"
#include "recsim/poisson.hpp"
#include "recsim/rng.hpp"
#include "recsim/stretch.hpp"

namespace recsim {

struct RunResult {
  double sample = 0.0;
  std::uint64_t selected_index = 0;  // N
  std::uint64_t steps = 0;           // K; see each sampler for what is counted
  std::optional<double> acceptance_uniform;                  // rejection only
  std::optional<std::pair<std::uint32_t, std::uint64_t>> thread_tag;  // (j*, N_j*)
  bool exhausted_budget = false;     // step-limited only
};

struct SamplerOptions {
  bool log_domain = false;  // track times as log-arrival times
};

// Global rejection sampler: accepts the first arrival with U < r(Y)/M.
// Arrival n draws (acceptance uniform, location) from fold_in(seed, n).
RunResult rejection_sample(const TargetProposalPair& pair, double bound_m,
                           std::uint64_t seed);

// Global A* sampler. steps excludes the arrival that triggers termination,
// so steps ~ Geom(1/M).
RunResult astar_sample(const TargetProposalPair& pair, double bound_m, std::uint64_t seed,
                       const SamplerOptions& opts = {});

// Global greedy Poisson rejection sampler; accepts the first arrival with
// r(Y) >= sha(T). steps includes the accepted arrival, E[steps] = ||r||_inf.
RunResult gprs_sample(const TargetProposalPair& pair, const StretchFunction& stretch,
                      std::uint64_t seed);

// Parallel variants over J logical rate-1/J substreams (fold_in(seed, j),
// j in [1, J]), merged deterministically in global time order so every
// termination check sees a fully up-to-date running bound (the
// zero-synchronisation-delay idealisation). steps is the total simulated
// across threads: E = M + J - 1 (A*) and ||r||_inf + J - 1 (GPRS).
RunResult astar_parallel(const TargetProposalPair& pair, double bound_m, std::uint32_t j_threads,
                         std::uint64_t seed);
RunResult gprs_parallel(const TargetProposalPair& pair, const StretchFunction& stretch,
                        std::uint32_t j_threads, std::uint64_t seed);

// Step-limited variants. Budget kUnlimited reproduces the exact sampler.
inline constexpr std::uint64_t kUnlimited = ~std::uint64_t{0};
RunResult astar_limited(const TargetProposalPair& pair, double bound_m, std::uint64_t budget,
                        std::uint64_t seed);
RunResult gprs_limited(const TargetProposalPair& pair, const StretchFunction& stretch,
                       std::uint64_t budget, std::uint64_t seed);

// ceil(2^((kl_bits + 1) / eps)); throws "budget overflow" beyond 2^63.
std::uint64_t budget_for_tv(double kl_bits, double eps);

// O(1) decoding of a serial global run's sample from (seed, N).
double decode_global(std::uint64_t seed, std::uint64_t selected_index,
                     const ContinuousDistribution& proposal);

}  // namespace recsim

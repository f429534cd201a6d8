#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "recsim/distributions.hpp"
#include "recsim/samplers.hpp"
#include "recsim/stretch.hpp"

namespace recsim {

// Outcome of a branch-and-bound run on the mode-following branch of the
// on-sample BSP tree.
struct BnbRunResult {
  double sample = 0.0;
  std::uint64_t accept_depth = 0;           // depth of the accepted node
  std::vector<std::uint8_t> path_bits;      // its search path, length accept_depth
  std::uint64_t steps = 0;                  // arrivals examined; see each sampler
  std::vector<double> per_step_fraction;    // retained fraction of every split
  double bound_mass = 0.0;                  // P(B_delta) of the accepted node
};

// Branch-and-bound A* sampling for quasiconcave ratios with bound M.
// steps excludes the arrival that triggers termination.
BnbRunResult bnb_astar(const TargetProposalPair& pair, double bound_m, std::uint64_t seed);

// Branch-and-bound GPRS; no ratio bound needed, requires a solved stretch
// function. steps includes the accepted arrival.
BnbRunResult bnb_gprs(const TargetProposalPair& pair, const StretchFunction& stretch,
                      std::uint64_t seed);

// Replays the branch from (seed, depth, path_bits); bit-identical to the
// encoder's sample in O(depth). Throws "corrupt path" when a bit contradicts
// the mode-side split rule.
double decode_bnb(std::uint64_t seed, std::uint64_t depth,
                  const std::vector<std::uint8_t>& path_bits, const TargetProposalPair& pair);

// Heap index of the node addressed by the path: root 1, bit 0 -> 2H,
// bit 1 -> 2H + 1.
mpz_class heap_index(const std::vector<std::uint8_t>& path_bits);

}  // namespace recsim

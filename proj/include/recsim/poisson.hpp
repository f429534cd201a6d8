#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "recsim/distributions.hpp"
#include "recsim/rng.hpp"

namespace recsim {

// One point of a spatio-temporal Poisson process with mean measure P x lambda.
struct Arrival {
  std::uint64_t index = 0;  // 1-based for global generators, depth for branches
  double location = 0.0;
  double time = 0.0;
  double log_time = 0.0;
};

// Generates arrivals in time order. Each arrival n consumes exactly two draw
// slots of fold_in(base, n): slot 0 the Exp(1) inter-arrival, slot 1 the
// location uniform, so locations are reconstructible from (seed, n) alone.
// `rate` scales the process intensity (rate 1/J for parallel substreams).
class GlobalArrivalGen {
 public:
  GlobalArrivalGen(SeedStream base, const ContinuousDistribution& proposal,
                   double rate = 1.0)
      : base_(base), proposal_(&proposal), rate_(rate) {}

  Arrival next();

  std::uint64_t count() const { return n_; }

 private:
  SeedStream base_;
  const ContinuousDistribution* proposal_;
  double rate_;
  std::uint64_t n_ = 0;
  double t_ = 0.0;
  double log_t_ = -std::numeric_limits<double>::infinity();
};

// O(1) reconstruction of the n-th arrival location (n >= 1).
double arrival_location(const SeedStream& base, std::uint64_t n,
                        const ContinuousDistribution& proposal);

// State of the mode-following branch of an on-sample BSP tree.
struct BranchState {
  std::uint64_t depth = 0;
  double lo, hi;           // current bounds (lo, hi]
  double time = 0.0;       // cumulative arrival time T^d
  double mass = 1.0;       // P((lo, hi]), maintained as the retained-fraction product
  std::vector<std::uint8_t> path_bits;     // 0 = kept left, 1 = kept right
  std::vector<double> fractions;           // per-step retained fraction

  BranchState()
      : lo(-std::numeric_limits<double>::infinity()),
        hi(std::numeric_limits<double>::infinity()) {}
};

// First arrival of the restricted process after the current branch time.
// Draws come from fold_in(base, depth): slot 0 exponential, slot 1 uniform.
Arrival next_branch_arrival(BranchState& state, const SeedStream& base,
                            const ContinuousDistribution& proposal);

// Splits the branch at y_pivot, keeping the side containing the mode
// (ties keep the left interval). Appends the path bit and the retained
// fraction U or 1-U of the location reparameterisation.
void split_on_sample(BranchState& state, double y_pivot, double mode_point,
                     double location_uniform);

// ln(exp(log_t_prev) + delta) without overflow; log_t_prev may be -inf.
double log_domain_add_arrival(double log_t_prev, double delta);

}  // namespace recsim

#include "recsim/bnb.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace recsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BranchDraw {
  Arrival arrival;
  double location_uniform;
};

BranchDraw draw_at_depth(BranchState& state, const SeedStream& base,
                         const ContinuousDistribution& proposal) {
  double u = base.fold_in(state.depth).uniform_at(1);
  Arrival a = next_branch_arrival(state, base, proposal);
  return {a, u};
}

}  // namespace

BnbRunResult bnb_astar(const TargetProposalPair& pair, double bound_m, std::uint64_t seed) {
  if (!(bound_m >= 1.0)) throw std::invalid_argument("bnb_astar: M must be >= 1");
  if (!std::isfinite(pair.mode_point))
    throw std::invalid_argument("bnb_astar: needs a finite mode point");
  SeedStream base(seed);
  BranchState state;
  const double log_m = std::log(bound_m);

  BnbRunResult best;
  double u_min = kInf;
  std::uint64_t arrivals = 0;
  for (;;) {
    BranchDraw d = draw_at_depth(state, base, pair.proposal);
    ++arrivals;
    double lr = pair.log_ratio(d.arrival.location);
    if (lr > log_m + 1e-9) throw std::runtime_error("invalid bound: observed ratio exceeds M");
    double score = d.arrival.time / std::exp(lr);
    if (score < u_min) {
      u_min = score;
      best.sample = d.arrival.location;
      best.accept_depth = state.depth;
      best.path_bits = state.path_bits;
      best.bound_mass = state.mass;
    }
    if (u_min < d.arrival.time / bound_m) {
      best.steps = arrivals - 1;
      best.per_step_fraction = state.fractions;
      return best;
    }
    assert(pair.mode_point >= state.lo && pair.mode_point <= state.hi);
    split_on_sample(state, d.arrival.location, pair.mode_point, d.location_uniform);
  }
}

BnbRunResult bnb_gprs(const TargetProposalPair& pair, const StretchFunction& stretch,
                      std::uint64_t seed) {
  if (!std::isfinite(pair.mode_point))
    throw std::invalid_argument("bnb_gprs: needs a finite mode point");
  SeedStream base(seed);
  BranchState state;
  std::uint64_t arrivals = 0;
  for (;;) {
    BranchDraw d = draw_at_depth(state, base, pair.proposal);
    ++arrivals;
    if (pair.ratio(d.arrival.location) >= stretch.sha(d.arrival.time)) {
      BnbRunResult r;
      r.sample = d.arrival.location;
      r.accept_depth = state.depth;
      r.path_bits = state.path_bits;
      r.bound_mass = state.mass;
      r.steps = arrivals;
      r.per_step_fraction = state.fractions;
      return r;
    }
    assert(pair.mode_point >= state.lo && pair.mode_point <= state.hi);
    split_on_sample(state, d.arrival.location, pair.mode_point, d.location_uniform);
  }
}

double decode_bnb(std::uint64_t seed, std::uint64_t depth,
                  const std::vector<std::uint8_t>& path_bits, const TargetProposalPair& pair) {
  if (path_bits.size() != depth) throw std::invalid_argument("decode_bnb: path length != depth");
  SeedStream base(seed);
  BranchState state;
  for (std::uint64_t d = 0; d < depth; ++d) {
    double u = base.fold_in(d).uniform_at(1);
    double y = quantile_restricted(pair.proposal, state.lo, state.hi, u);
    std::uint8_t expected = pair.mode_point <= y ? 0 : 1;
    if (path_bits[d] != expected) throw std::runtime_error("decode_bnb: corrupt path");
    split_on_sample(state, y, pair.mode_point, u);
  }
  double u = base.fold_in(depth).uniform_at(1);
  return quantile_restricted(pair.proposal, state.lo, state.hi, u);
}

mpz_class heap_index(const std::vector<std::uint8_t>& path_bits) {
  mpz_class h = 1;
  for (std::uint8_t b : path_bits) {
    h <<= 1;
    if (b) h += 1;
  }
  return h;
}

}  // namespace recsim

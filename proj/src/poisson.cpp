#include "recsim/poisson.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace recsim {

Arrival GlobalArrivalGen::next() {
  ++n_;
  SeedStream slot = base_.fold_in(n_);
  double delta = slot.exponential_at(0) / rate_;
  t_ += delta;
  log_t_ = log_domain_add_arrival(log_t_, delta);
  double loc = proposal_->quantile(slot.uniform_at(1));
  return Arrival{n_, loc, t_, log_t_};
}

double arrival_location(const SeedStream& base, std::uint64_t n,
                        const ContinuousDistribution& proposal) {
  if (n == 0) throw std::invalid_argument("arrival_location: index must be >= 1");
  return proposal.quantile(base.fold_in(n).uniform_at(1));
}

Arrival next_branch_arrival(BranchState& state, const SeedStream& base,
                            const ContinuousDistribution& proposal) {
  if (!(state.mass > 0.0)) throw std::runtime_error("next_branch_arrival: branch exhausted");
  SeedStream slot = base.fold_in(state.depth);
  double e = slot.exponential_at(0);
  double u = slot.uniform_at(1);
  state.time += e / state.mass;
  double loc = quantile_restricted(proposal, state.lo, state.hi, u);
  return Arrival{state.depth, loc, state.time, std::log(state.time)};
}

void split_on_sample(BranchState& state, double y_pivot, double mode_point,
                     double location_uniform) {
  if (!(y_pivot >= state.lo && y_pivot <= state.hi))
    throw std::logic_error("split_on_sample: pivot outside bounds");
  // Ties (mode exactly on the pivot) keep the left interval.
  double frac;
  if (mode_point <= y_pivot) {
    state.hi = y_pivot;
    state.path_bits.push_back(0);
    frac = location_uniform;
  } else {
    state.lo = y_pivot;
    state.path_bits.push_back(1);
    frac = 1.0 - location_uniform;
  }
  state.fractions.push_back(frac);
  state.mass *= frac;
  state.depth += 1;
  if (!(state.mass > 1e-300))
    throw std::runtime_error("split_on_sample: branch mass underflow");
}

double log_domain_add_arrival(double log_t_prev, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("log_domain_add_arrival: delta must be > 0");
  double ld = std::log(delta);
  if (log_t_prev == -std::numeric_limits<double>::infinity()) return ld;
  double m = log_t_prev > ld ? log_t_prev : ld;
  return m + std::log(std::exp(log_t_prev - m) + std::exp(ld - m));
}

}  // namespace recsim

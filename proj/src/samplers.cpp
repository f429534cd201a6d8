#include "recsim/samplers.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace recsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_bound(const TargetProposalPair& pair, double bound_m, double y) {
  // The bound must dominate the ratio at every proposed point, or the
  // output law breaks.
  if (pair.log_ratio(y) > std::log(bound_m) + 1e-9)
    throw std::runtime_error("invalid bound: observed ratio exceeds M");
}

}  // namespace

RunResult rejection_sample(const TargetProposalPair& pair, double bound_m,
                           std::uint64_t seed) {
  if (!(bound_m >= 1.0)) throw std::invalid_argument("rejection_sample: M must be >= 1");
  SeedStream base(seed);
  const double log_m = std::log(bound_m);
  for (std::uint64_t n = 1;; ++n) {
    SeedStream slot = base.fold_in(n);
    double u = slot.uniform_at(0);  // acceptance coin (rejection ignores times)
    double y = pair.proposal.quantile(slot.uniform_at(1));
    double lr = pair.log_ratio(y);
    if (lr > log_m + 1e-9) throw std::runtime_error("invalid bound: observed ratio exceeds M");
    if (std::log(u) < lr - log_m) {
      RunResult r;
      r.sample = y;
      r.selected_index = n;
      r.steps = n;
      r.acceptance_uniform = u;
      return r;
    }
  }
}

RunResult astar_sample(const TargetProposalPair& pair, double bound_m, std::uint64_t seed,
                       const SamplerOptions& opts) {
  if (!(bound_m >= 1.0)) throw std::invalid_argument("astar_sample: M must be >= 1");
  SeedStream base(seed);
  GlobalArrivalGen gen(base, pair.proposal);
  const double log_m = std::log(bound_m);
  RunResult r;
  if (opts.log_domain) {
    double log_u = kInf;
    for (;;) {
      Arrival a = gen.next();
      check_bound(pair, bound_m, a.location);
      double log_score = a.log_time - pair.log_ratio(a.location);
      if (log_score < log_u) {
        log_u = log_score;
        r.sample = a.location;
        r.selected_index = a.index;
      }
      if (log_u < a.log_time - log_m) {
        r.steps = a.index - 1;
        return r;
      }
    }
  }
  double u = kInf;
  for (;;) {
    Arrival a = gen.next();
    check_bound(pair, bound_m, a.location);
    double score = a.time / pair.ratio(a.location);
    if (score < u) {
      u = score;
      r.sample = a.location;
      r.selected_index = a.index;
    }
    if (u < a.time / bound_m) {
      r.steps = a.index - 1;
      return r;
    }
  }
}

RunResult gprs_sample(const TargetProposalPair& pair, const StretchFunction& stretch,
                      std::uint64_t seed) {
  SeedStream base(seed);
  GlobalArrivalGen gen(base, pair.proposal);
  for (;;) {
    Arrival a = gen.next();
    if (pair.ratio(a.location) >= stretch.sha(a.time)) {
      RunResult r;
      r.sample = a.location;
      r.selected_index = a.index;
      r.steps = a.index;
      return r;
    }
  }
}

namespace {

struct PendingArrival {
  double time;
  std::uint32_t thread;
  std::uint64_t index;
  double location;
  bool operator>(const PendingArrival& o) const {
    if (time != o.time) return time > o.time;
    return thread > o.thread;
  }
};

// Deterministic zero-delay merge: J substreams popped in global time order.
class Superposition {
 public:
  Superposition(std::uint64_t seed, const ContinuousDistribution& proposal,
                std::uint32_t j_threads) {
    SeedStream base(seed);
    gens_.reserve(j_threads);
    for (std::uint32_t j = 1; j <= j_threads; ++j)
      gens_.emplace_back(base.fold_in(j), proposal, 1.0 / static_cast<double>(j_threads));
    for (std::uint32_t j = 0; j < j_threads; ++j) push_next(j);
  }

  bool empty() const { return queue_.empty(); }
  PendingArrival pop() {
    PendingArrival a = queue_.top();
    queue_.pop();
    return a;
  }
  void push_next(std::uint32_t thread_zero_based) {
    Arrival a = gens_[thread_zero_based].next();
    queue_.push({a.time, thread_zero_based, a.index, a.location});
  }

 private:
  std::vector<GlobalArrivalGen> gens_;
  std::priority_queue<PendingArrival, std::vector<PendingArrival>, std::greater<>> queue_;
};

}  // namespace

RunResult astar_parallel(const TargetProposalPair& pair, double bound_m,
                         std::uint32_t j_threads, std::uint64_t seed) {
  if (j_threads < 1) throw std::invalid_argument("astar_parallel: J must be >= 1");
  if (!(bound_m >= 1.0)) throw std::invalid_argument("astar_parallel: M must be >= 1");
  Superposition sup(seed, pair.proposal, j_threads);
  double u = kInf;
  std::uint64_t total = 0;
  RunResult r;
  std::uint32_t live = j_threads;
  while (live > 0) {
    PendingArrival a = sup.pop();
    ++total;
    check_bound(pair, bound_m, a.location);
    double score = a.time / pair.ratio(a.location);
    if (score < u) {
      u = score;
      r.sample = a.location;
      r.selected_index = a.index;
      r.thread_tag = std::make_pair(a.thread + 1, a.index);
    }
    if (u < a.time / bound_m) {
      --live;  // this thread's terminating arrival
    } else {
      sup.push_next(a.thread);
    }
  }
  r.steps = total - 1;  // the selected thread's terminator is not a sample
  return r;
}

RunResult gprs_parallel(const TargetProposalPair& pair, const StretchFunction& stretch,
                        std::uint32_t j_threads, std::uint64_t seed) {
  if (j_threads < 1) throw std::invalid_argument("gprs_parallel: J must be >= 1");
  Superposition sup(seed, pair.proposal, j_threads);
  double t_star = kInf;
  std::uint64_t total = 0;
  RunResult r;
  std::uint32_t live = j_threads;
  while (live > 0) {
    PendingArrival a = sup.pop();
    ++total;
    if (t_star < a.time) {
      --live;
      continue;
    }
    if (pair.ratio(a.location) >= stretch.sha(a.time)) {
      t_star = a.time;
      r.sample = a.location;
      r.selected_index = a.index;
      r.thread_tag = std::make_pair(a.thread + 1, a.index);
      --live;
      continue;
    }
    sup.push_next(a.thread);
  }
  r.steps = total;
  return r;
}

RunResult astar_limited(const TargetProposalPair& pair, double bound_m, std::uint64_t budget,
                        std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("astar_limited: budget must be >= 1");
  SeedStream base(seed);
  GlobalArrivalGen gen(base, pair.proposal);
  double u = kInf;
  RunResult r;
  for (;;) {
    Arrival a = gen.next();
    check_bound(pair, bound_m, a.location);
    double score = a.time / pair.ratio(a.location);
    if (score < u) {
      u = score;
      r.sample = a.location;
      r.selected_index = a.index;
    }
    if (u < a.time / bound_m) {
      r.steps = a.index - 1;
      return r;
    }
    if (a.index >= budget) {
      r.steps = budget;
      r.exhausted_budget = true;
      return r;
    }
  }
}

RunResult gprs_limited(const TargetProposalPair& pair, const StretchFunction& stretch,
                       std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1) throw std::invalid_argument("gprs_limited: budget must be >= 1");
  SeedStream base(seed);
  GlobalArrivalGen gen(base, pair.proposal);
  for (;;) {
    Arrival a = gen.next();
    if (pair.ratio(a.location) >= stretch.sha(a.time)) {
      RunResult r;
      r.sample = a.location;
      r.selected_index = a.index;
      r.steps = a.index;
      return r;
    }
    if (a.index >= budget) {
      // Contingency rule: return the budget-th arrival itself.
      RunResult r;
      r.sample = a.location;
      r.selected_index = a.index;
      r.steps = a.index;
      r.exhausted_budget = true;
      return r;
    }
  }
}

std::uint64_t budget_for_tv(double kl_bits, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("budget_for_tv: eps outside (0,1]");
  double ex = (kl_bits + 1.0) / eps;
  if (ex >= 63.0) throw std::overflow_error("budget_for_tv: budget overflow");
  return static_cast<std::uint64_t>(std::ceil(std::exp2(ex)));
}

double decode_global(std::uint64_t seed, std::uint64_t selected_index,
                     const ContinuousDistribution& proposal) {
  return arrival_location(SeedStream(seed), selected_index, proposal);
}

}  // namespace recsim

#pragma once

#include <vector>

#include "recsim/distributions.hpp"
#include "recsim/width.hpp"

namespace recsim {

// Tabulated solution of the shrink ODE
//   sha'(t) = wq(sha) - sha * wp(sha),  sha(0) = 0, sha'(0) = 1,
// with sha = sigma^{-1}. sigma is recovered by inverting the table.
class StretchFunction {
 public:
  // Knots of the accepted integrator steps: times, heights, slopes.
  std::vector<double> t, h, hp;
  double h_max = 0.0;   // last tabulated height
  bool complete = false;  // sha' underflowed; sha(t > t_end) == h_max

  double sha(double time) const;        // sigma^{-1}(time)
  double sha_prime(double time) const;
  double sigma(double height) const;    // +inf at/above h_max when complete

  double t_end() const { return t.empty() ? 0.0 : t.back(); }
};

// Integrates the shrink ODE with an adaptive embedded Runge-Kutta pair until
// sha' < 1e-14 (table complete) or t_max is reached.
StretchFunction solve_stretch(const TargetProposalPair& pair, const WidthFunction& width,
                              double t_max = 1e9, double ode_tol = 1e-10);

}  // namespace recsim

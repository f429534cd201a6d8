#pragma once

#include <functional>

#include "recsim/distributions.hpp"
#include "recsim/width.hpp"

namespace recsim {

namespace quad {
// Adaptive Gauss-Kronrod 15(7). Throws on non-convergence, reporting the
// achieved tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);
}  // namespace quad

// All divergences are reported in bits.

// KL divergence D(Q || P): closed form for Gaussian/Gaussian and
// Laplace/Laplace, quadrature of E_Q[lb r] otherwise.
double kl_divergence(const TargetProposalPair& pair);

// Renyi infinity divergence lb ||r||_inf. Uses the pair's sup bound when
// present, otherwise a grid search with golden-section polish. Unbounded
// ratios return +infinity.
double renyi_inf(const TargetProposalPair& pair);

// Channel simulation divergence -int wp lb wp dh. The width is the closed
// form when available, empirical otherwise.
double csd(const TargetProposalPair& pair, double quad_tol = 1e-8);
double csd_from_width(const WidthFunction& width, double quad_tol = 1e-8);

// D_CS - D_KL for the d-fold product pair N(mu, sigma2 I) vs N(0, I).
double csd_gap_product_gaussian(double mu, double sigma2, int d, double quad_tol = 1e-8);

}  // namespace recsim

#pragma once

#include "mmlqg/dense.hpp"
#include "mmlqg/nce.hpp"
#include "mmlqg/riccati.hpp"

namespace mmlqg {

// Exact mean/variance of an individual minor state under the limiting
// dynamics; the law is Gaussian because the initial states are sampled
// Gaussian and the dynamics are linear with additive noise.
struct MomentTrajectory {
  TimeGrid grid;
  DenseSeries mu;  // mean, mu(0) = x_mean; coincides with xbar node-wise
  DenseSeries v;   // variance, v(0) = x_var, v >= 0
};

MomentTrajectory solve_moments(const ValidatedParams& vp,
                               const RiccatiSolution& riccati,
                               const NceSolution& nce);

// Limiting minor cost
//   1/2 int [Q((mu-xbar)^2 + v) + R E u^2] dt + 1/2 H (mu(T)^2 + v(T)),
// with E u^2 = (B/R)^2 ((P mu + k)^2 + P^2 v), by trapezoid quadrature on
// the shared grid (same O(h^2) bias as the empirical costs).
double limiting_cost_minor(const ValidatedParams& vp,
                           const RiccatiSolution& riccati,
                           const NceSolution& nce,
                           const MomentTrajectory& moments);

// Limiting major cost: deterministic quadrature of
//   1/2 int [Q0 (x0_hat - xbar)^2 + R0 u0^2] dt + 1/2 H0 x0_hat(0)^2.
double limiting_cost_major(const ValidatedParams& vp, const NceSolution& nce);

// Max node-wise |mu - xbar|; both satisfy the same ODE from the same
// initial value, so this measures pure integration error.
double mean_field_identity_gap(const MomentTrajectory& moments,
                               const NceSolution& nce);

}  // namespace mmlqg

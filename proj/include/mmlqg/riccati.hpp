#pragma once

#include <vector>

#include "mmlqg/dense.hpp"
#include "mmlqg/grid.hpp"
#include "mmlqg/params.hpp"

namespace mmlqg {

// Solution of the backward scalar Riccati equation
//   P'(t) + 2 A P(t) - (B^2/R) P(t)^2 + Q = 0,  P(T) = H,
// which decouples the minor player's adjoint as p_i = P x_i + k.
struct RiccatiSolution {
  TimeGrid grid;
  DenseSeries P;          // stored at kLevelRiccati
  double supremum_bound;  // a-priori bound e^{2|A|T} (H + Q T)

  double at(int j) const { return P.node(j); }
  std::vector<double> node_values() const { return P.node_values(); }

  // Diffusion coefficient sigma*P(t) of the minor adjoint process (the
  // dW_i integrand obtained from the decoupling ansatz).
  double minor_adjoint_diffusion(int j, const ValidatedParams& vp) const {
    return vp->sigma * at(j);
  }
};

// Backward RK4 integration from P(T) = H. The terminal node is assigned
// exactly. `escape_cap` <= 0 selects a cap derived from the a-priori bound;
// exceeding the cap (or a non-finite value) raises SolverError("Riccati
// escape ..."), which cannot happen under the validated sign conditions.
RiccatiSolution solve_riccati(const ValidatedParams& vp, const TimeGrid& grid,
                              double escape_cap = 0.0);

// Max over interior public nodes of |P' + 2AP - (B^2/R)P^2 + Q| with P'
// estimated by central differences.
double riccati_residual(const RiccatiSolution& sol, const ValidatedParams& vp);

}  // namespace mmlqg

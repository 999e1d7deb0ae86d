#include "mmlqg/riccati.hpp"

#include <algorithm>
#include <cmath>

#include "mmlqg/errors.hpp"

namespace mmlqg {

namespace {

// Comparison bound: dropping the -(B^2/R)P^2 term in backward time can only
// increase P, leaving the linear equation with solution <= e^{2|A|T}(H + QT).
double supremum_bound(const ModelParams& p) {
  return std::exp(2.0 * std::abs(p.A) * p.T) * (p.H + p.Q * p.T);
}

}  // namespace

RiccatiSolution solve_riccati(const ValidatedParams& vp, const TimeGrid& grid,
                              double escape_cap) {
  const ModelParams& p = vp.get();
  const double b = vp.minor_gain();
  const double bound = supremum_bound(p);
  double cap = escape_cap > 0.0 ? escape_cap
                                : std::max(1e6, 100.0 * (bound + 1.0));

  auto rhs = [&](std::int64_t, double P) {
    return -2.0 * p.A * P + b * P * P - p.Q;
  };
  RiccatiSolution sol;
  sol.grid = grid;
  sol.supremum_bound = bound;
  sol.P = integrate_backward_scalar(grid, kLevelRiccati, p.H, rhs, cap,
                                    "Riccati escape: |P| exceeded the cap; "
                                    "check coefficient signs");
  sol.P.values.back() = p.H;  // terminal condition holds exactly
  return sol;
}

double riccati_residual(const RiccatiSolution& sol, const ValidatedParams& vp) {
  const ModelParams& p = vp.get();
  const double b = vp.minor_gain();
  const double h = sol.grid.step();
  double worst = 0.0;
  for (int j = 1; j < sol.grid.M; ++j) {
    const double dp = (sol.at(j + 1) - sol.at(j - 1)) / (2.0 * h);
    const double P = sol.at(j);
    worst = std::max(worst, std::abs(dp + 2.0 * p.A * P - b * P * P + p.Q));
  }
  return worst;
}

}  // namespace mmlqg

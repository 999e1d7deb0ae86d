#include "mmlqg/moments.hpp"

#include <cmath>

#include "mmlqg/errors.hpp"
#include "mmlqg/tolerances.hpp"

namespace mmlqg {

MomentTrajectory solve_moments(const ValidatedParams& vp,
                               const RiccatiSolution& riccati,
                               const NceSolution& nce) {
  const ModelParams& p = vp.get();
  if (nce.grid != riccati.grid) {
    throw UsageError("solve_moments: grid mismatch between inputs");
  }
  const TimeGrid& grid = nce.grid;
  const double b = vp.minor_gain();

  auto mu_rhs = [&](std::int64_t s, double mu) {
    const double Pt = riccati.P.at(kLevelResponse, s);
    return (p.A - b * Pt) * mu - b * nce.k.at(kLevelResponse, s) +
           p.D * nce.xbar.at(kLevelResponse, s) +
           p.alpha * nce.x0_hat.at(kLevelResponse, s);
  };
  auto v_rhs = [&](std::int64_t s, double v) {
    const double Pt = riccati.P.at(kLevelResponse, s);
    return 2.0 * (p.A - b * Pt) * v + p.sigma * p.sigma;
  };

  MomentTrajectory out;
  out.grid = grid;
  out.mu = integrate_forward_scalar(grid, kLevelBase, p.x_mean, mu_rhs,
                                    kDefaultStateCap,
                                    "moment integration overflow");
  out.v = integrate_forward_scalar(grid, kLevelBase, p.x_var, v_rhs,
                                   kDefaultStateCap,
                                   "moment integration overflow");
  return out;
}

double limiting_cost_minor(const ValidatedParams& vp,
                           const RiccatiSolution& riccati,
                           const NceSolution& nce,
                           const MomentTrajectory& moments) {
  const ModelParams& p = vp.get();
  const TimeGrid& grid = moments.grid;
  const double gain = p.B / p.R;  // feedback magnitude B/R

  auto integrand = [&](int j) {
    const double mu = moments.mu.node(j);
    const double v = moments.v.node(j);
    const double xb = nce.xbar.node(j);
    const double Pj = riccati.at(j);
    const double kj = nce.k.node(j);
    const double dev = mu - xb;
    const double eu2 =
        gain * gain * ((Pj * mu + kj) * (Pj * mu + kj) + Pj * Pj * v);
    return p.Q * (dev * dev + v) + p.R * eu2;
  };
  const double muT = moments.mu.node(grid.M);
  const double vT = moments.v.node(grid.M);
  return 0.5 * trapezoid(grid, integrand) + 0.5 * p.H * (muT * muT + vT);
}

double limiting_cost_major(const ValidatedParams& vp, const NceSolution& nce) {
  const ModelParams& p = vp.get();
  const TimeGrid& grid = nce.grid;

  auto integrand = [&](int j) {
    const double dev = nce.x0_hat.node(j) - nce.xbar.node(j);
    const double u0 = nce.u0_node(j, vp);
    return p.Q0 * dev * dev + p.R0 * u0 * u0;
  };
  const double x00 = nce.x0_hat.node(0);
  return 0.5 * trapezoid(grid, integrand) + 0.5 * p.H0 * x00 * x00;
}

double mean_field_identity_gap(const MomentTrajectory& moments,
                               const NceSolution& nce) {
  double worst = 0.0;
  for (int j = 0; j <= moments.grid.M; ++j) {
    worst = std::max(worst, std::abs(moments.mu.node(j) - nce.xbar.node(j)));
  }
  return worst;
}

}  // namespace mmlqg

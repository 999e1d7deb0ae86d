#include "mmlqg/nce.hpp"

#include <algorithm>
#include <cmath>

#include "mmlqg/errors.hpp"
#include "mmlqg/tolerances.hpp"

namespace mmlqg {

AuxiliaryCoefficients auxiliary_coefficients(const ValidatedParams& vp,
                                             double P) {
  const ModelParams& p = vp.get();
  const double b = vp.minor_gain();
  return AuxiliaryCoefficients{
      p.A + p.D - b * P,  p.alpha, -b,
      -p.A + b * P,       p.Q - p.D * P, -p.alpha * P,
  };
}

LinearBvpSystem assemble_nce(const ValidatedParams& vp,
                             const RiccatiSolution& riccati) {
  const ModelParams& p = vp.get();
  if (riccati.grid != riccati.P.grid) {
    throw UsageError("assemble_nce: inconsistent Riccati solution");
  }
  const TimeGrid grid = riccati.grid;

  LinearBvpSystem sys;
  sys.dim = kNceDim;
  sys.level = kLevelNce;

  const double b0 = vp.major_gain();
  // Drift sampled through P at the Riccati storage level (= level + 1).
  const DenseSeries P = riccati.P;
  const double b = vp.minor_gain();
  sys.drift = [p, b0, b, P](std::int64_t stage, Eigen::MatrixXd& m) {
    const double Pt = P.at(kLevelNce + 1, stage);
    m.setZero();
    // d x0_hat = A0 x0_hat - (B0^2/R0) p0
    m(kX0Hat, kX0Hat) = p.A0;
    m(kX0Hat, kP0) = -b0;
    // d xbar = (A + D - (B^2/R) P) xbar - (B^2/R) k + alpha x0_hat
    m(kXbar, kX0Hat) = p.alpha;
    m(kXbar, kXbar) = p.A + p.D - b * Pt;
    m(kXbar, kK) = -b;
    // d k = (-A + (B^2/R) P) k + (Q - D P) xbar - alpha P x0_hat
    m(kK, kX0Hat) = -p.alpha * Pt;
    m(kK, kXbar) = p.Q - p.D * Pt;
    m(kK, kK) = -p.A + b * Pt;
    // d p0 = -A0 p0 - Q0 (x0_hat - xbar) - alpha p + alpha P q
    m(kP0, kX0Hat) = -p.Q0;
    m(kP0, kXbar) = p.Q0;
    m(kP0, kP0) = -p.A0;
    m(kP0, kP) = -p.alpha;
    m(kP0, kQadj) = p.alpha * Pt;
    // d p = -(A + D - (B^2/R) P) p + Q0 (x0_hat - xbar) - (Q - D P) q
    m(kP, kX0Hat) = p.Q0;
    m(kP, kXbar) = -p.Q0;
    m(kP, kP) = -(p.A + p.D - b * Pt);
    m(kP, kQadj) = -(p.Q - p.D * Pt);
    // d q = (A - (B^2/R) P) q + (B^2/R) p
    m(kQadj, kP) = b;
    m(kQadj, kQadj) = p.A - b * Pt;
  };
  sys.forcing = nullptr;  // data enters through the boundary operator only

  // Row order: x0_hat(T) = xi, xbar(0) = x, k(T) = 0,
  // p0(0) + H0 x0_hat(0) = 0, p(T) = 0, q(0) = 0.
  sys.boundary_initial = Eigen::MatrixXd::Zero(kNceDim, kNceDim);
  sys.boundary_terminal = Eigen::MatrixXd::Zero(kNceDim, kNceDim);
  sys.boundary_values = Eigen::VectorXd::Zero(kNceDim);
  sys.boundary_terminal(0, kX0Hat) = 1.0;
  sys.boundary_values(0) = p.xi;
  sys.boundary_initial(1, kXbar) = 1.0;
  sys.boundary_values(1) = p.x_mean;
  sys.boundary_terminal(2, kK) = 1.0;
  sys.boundary_initial(3, kP0) = 1.0;
  sys.boundary_initial(3, kX0Hat) = p.H0;
  sys.boundary_terminal(4, kP) = 1.0;
  sys.boundary_initial(5, kQadj) = 1.0;
  return sys;
}

namespace {

DenseSeries extract(const BvpSolution& sol, int component) {
  DenseSeries s;
  s.grid = sol.grid;
  s.level = sol.level;
  const auto cols = sol.trajectory.cols();
  s.values.resize(cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    s.values[i] = sol.trajectory(component, i);
  }
  return s;
}

}  // namespace

NceSolution solve_nce(const ValidatedParams& vp, const RiccatiSolution& riccati,
                      const Eigen::MatrixXd& basis) {
  const LinearBvpSystem sys = assemble_nce(vp, riccati);
  const BvpSolution bvp = solve_linear_bvp(sys, riccati.grid, basis);

  NceSolution out;
  out.grid = riccati.grid;
  out.x0_hat = extract(bvp, kX0Hat);
  out.xbar = extract(bvp, kXbar);
  out.k = extract(bvp, kK);
  out.p0 = extract(bvp, kP0);
  out.p = extract(bvp, kP);
  out.q = extract(bvp, kQadj);
  out.z0.assign(riccati.grid.M + 1, 0.0);
  out.beta0.assign(riccati.grid.M + 1, 0.0);
  out.beta_bar.assign(riccati.grid.M + 1, 0.0);
  out.condition_number = bvp.condition_number;
  return out;
}

double NceResidualReport::worst_equation() const {
  return *std::max_element(equation_max.begin(), equation_max.end());
}

double NceResidualReport::worst_boundary() const {
  return *std::max_element(boundary_defect.begin(), boundary_defect.end());
}

NceResidualReport nce_residual(const NceSolution& sol,
                               const LinearBvpSystem& system) {
  const TimeGrid& grid = sol.grid;
  const double h = grid.step();
  NceResidualReport report;

  Eigen::VectorXd y(kNceDim), ylo(kNceDim), yhi(kNceDim);
  for (int j = 1; j < grid.M; ++j) {
    for (int c = 0; c < kNceDim; ++c) {
      y[c] = sol.component(c).node(j);
      ylo[c] = sol.component(c).node(j - 1);
      yhi[c] = sol.component(c).node(j + 1);
    }
    const Eigen::VectorXd res =
        (yhi - ylo) / (2.0 * h) - system.drift_at(0, j) * y;
    for (int c = 0; c < kNceDim; ++c) {
      report.equation_max[c] = std::max(report.equation_max[c],
                                        std::abs(res[c]));
    }
  }

  Eigen::VectorXd y0(kNceDim), yT(kNceDim);
  for (int c = 0; c < kNceDim; ++c) {
    y0[c] = sol.component(c).node(0);
    yT[c] = sol.component(c).node(grid.M);
  }
  const Eigen::VectorXd defect = system.boundary_initial * y0 +
                                 system.boundary_terminal * yT -
                                 system.boundary_values;
  for (int c = 0; c < kNceDim; ++c) {
    report.boundary_defect[c] = std::abs(defect[c]);
  }
  return report;
}

std::pair<double, double> consistency_check(const NceSolution& sol,
                                            const ValidatedParams& vp,
                                            const RiccatiSolution& riccati) {
  const ModelParams& p = vp.get();
  const TimeGrid& grid = sol.grid;
  const double b = vp.minor_gain();

  // Mean-field equation re-integrated forward with the solved x0_hat and k.
  auto xbar_rhs = [&](std::int64_t s, double x) {
    const double Pt = riccati.P.at(kLevelResponse, s);
    return (p.A + p.D - b * Pt) * x - b * sol.k.at(kLevelResponse, s) +
           p.alpha * sol.x0_hat.at(kLevelResponse, s);
  };
  const DenseSeries xbar_re = integrate_forward_scalar(
      grid, kLevelBase, p.x_mean, xbar_rhs, kDefaultStateCap,
      "NCE unstable, refine grid or shrink T");

  // Offset equation re-integrated backward from 0 with the solved xbar.
  auto k_rhs = [&](std::int64_t s, double k) {
    const double Pt = riccati.P.at(kLevelResponse, s);
    return (-p.A + b * Pt) * k +
           (p.Q - p.D * Pt) * sol.xbar.at(kLevelResponse, s) -
           p.alpha * Pt * sol.x0_hat.at(kLevelResponse, s);
  };
  const DenseSeries k_re = integrate_backward_scalar(
      grid, kLevelBase, 0.0, k_rhs, kDefaultStateCap,
      "NCE unstable, refine grid or shrink T");

  double dev_x = 0.0, dev_k = 0.0;
  for (int j = 0; j <= grid.M; ++j) {
    dev_x = std::max(dev_x, std::abs(xbar_re.node(j) - sol.xbar.node(j)));
    dev_k = std::max(dev_k, std::abs(k_re.node(j) - sol.k.node(j)));
  }
  return {dev_x, dev_k};
}

}  // namespace mmlqg

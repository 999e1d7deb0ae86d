#include "mmlqg/bvp.hpp"

#include <cmath>
#include <vector>

#include "mmlqg/dense.hpp"
#include "mmlqg/errors.hpp"
#include "mmlqg/tolerances.hpp"

namespace mmlqg {

namespace {

constexpr const char* kUnstable = "NCE unstable, refine grid or shrink T";

}  // namespace

BvpSolution solve_linear_bvp(const LinearBvpSystem& system,
                             const TimeGrid& grid,
                             const Eigen::MatrixXd& basis_in) {
  const int n = system.dim;
  const Eigen::MatrixXd basis =
      basis_in.size() == 0 ? Eigen::MatrixXd::Identity(n, n) : basis_in;
  if (basis.rows() != n || basis.cols() != n) {
    throw UsageError("solve_linear_bvp: basis must be dim x dim");
  }

  // Augmented state [Phi | Yp] integrated in one RK4 sweep; the drift matrix
  // is assembled once per stage and applied to all n+1 columns.
  const int steps = steps_at_level(grid, system.level);
  const double h = grid.T / steps;
  Eigen::MatrixXd state(n, n + 1);
  state.leftCols(n) = basis;
  state.col(n).setZero();

  std::vector<Eigen::MatrixXd> phi(steps + 1);
  Eigen::MatrixXd particular(n, steps + 1);
  phi[0] = basis;
  particular.col(0).setZero();

  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd k1(n, n + 1), k2(n, n + 1), k3(n, n + 1), k4(n, n + 1),
      tmp(n, n + 1);

  auto eval = [&](std::int64_t stage, const Eigen::MatrixXd& s,
                  Eigen::MatrixXd& out) {
    system.drift(stage, m);
    out.noalias() = m * s;
    if (system.forcing) {
      system.forcing(stage, g);
      out.col(n) += g;
    }
  };

  for (int i = 0; i < steps; ++i) {
    const std::int64_t s0 = 2 * static_cast<std::int64_t>(i);
    eval(s0, state, k1);
    tmp = state + 0.5 * h * k1;
    eval(s0 + 1, tmp, k2);
    tmp = state + 0.5 * h * k2;
    eval(s0 + 1, tmp, k3);
    tmp = state + h * k3;
    eval(s0 + 2, tmp, k4);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) throw SolverError(kUnstable);
    phi[i + 1] = state.leftCols(n);
    particular.col(i + 1) = state.col(n);
  }

  // Boundary matching: (L_init basis + L_term Phi(T)) a = c - L_term Yp(T).
  Eigen::MatrixXd matching = system.boundary_initial * basis +
                             system.boundary_terminal * phi[steps];
  Eigen::VectorXd rhs =
      system.boundary_values - system.boundary_terminal * particular.col(steps);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      matching, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  const double cond =
      smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond < kConditionLimit)) {
    throw SolverError(
        "NCE singular: boundary-matching matrix condition number " +
        std::to_string(cond) +
        " exceeds the limit; unique solvability is lost at these parameters");
  }
  const Eigen::VectorXd a = svd.solve(rhs);

  BvpSolution sol;
  sol.grid = grid;
  sol.level = system.level;
  sol.condition_number = cond;
  sol.trajectory.resize(n, steps + 1);
  for (int i = 0; i <= steps; ++i) {
    sol.trajectory.col(i) = phi[i] * a + particular.col(i);
  }
  sol.initial_state = sol.trajectory.col(0);
  return sol;
}

BvpResidual bvp_residual(const BvpSolution& sol,
                         const LinearBvpSystem& system) {
  const int n = system.dim;
  const TimeGrid& grid = sol.grid;
  const double h = grid.step();
  const int stride = 1 << sol.level;  // solution columns per public step

  BvpResidual r;
  r.interior_max = Eigen::VectorXd::Zero(n);
  for (int j = 1; j < grid.M; ++j) {
    const Eigen::VectorXd dy =
        (sol.trajectory.col((j + 1) * stride) -
         sol.trajectory.col((j - 1) * stride)) /
        (2.0 * h);
    const Eigen::VectorXd y = sol.trajectory.col(j * stride);
    const Eigen::VectorXd f =
        system.drift_at(0, j) * y + system.forcing_at(0, j);
    r.interior_max = r.interior_max.cwiseMax((dy - f).cwiseAbs());
  }
  const Eigen::VectorXd defect =
      system.boundary_initial * sol.trajectory.col(0) +
      system.boundary_terminal * sol.trajectory.col(grid.M * stride) -
      system.boundary_values;
  r.boundary_defect = defect.cwiseAbs();
  return r;
}

}  // namespace mmlqg

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "mmlqg/grid.hpp"

namespace mmlqg {

// Linear two-point boundary value problem in canonical form
//   Y'(t) = M(t) Y(t) + g(t),   L_init Y(0) + L_term Y(T) = c.
// Coupled conditions (e.g. p0(0) + H0 x0(0) = 0) are single rows mixing
// several components. `drift` and `forcing` are sampled at stage indices on
// the (level+1) refinement of the grid; `forcing` may be empty (g == 0).
struct LinearBvpSystem {
  int dim = 0;
  int level = 0;
  std::function<void(std::int64_t, Eigen::MatrixXd&)> drift;
  std::function<void(std::int64_t, Eigen::VectorXd&)> forcing;
  Eigen::MatrixXd boundary_initial;
  Eigen::MatrixXd boundary_terminal;
  Eigen::VectorXd boundary_values;

  Eigen::MatrixXd drift_at(int query_level, std::int64_t idx) const {
    Eigen::MatrixXd m(dim, dim);
    drift(idx << (level + 1 - query_level), m);
    return m;
  }
  Eigen::VectorXd forcing_at(int query_level, std::int64_t idx) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    if (forcing) forcing(idx << (level + 1 - query_level), g);
    return g;
  }
};

struct BvpSolution {
  TimeGrid grid;
  int level = 0;
  Eigen::MatrixXd trajectory;  // dim x (steps+1), column j = Y at node j
  double condition_number = 0.0;
  Eigen::VectorXd initial_state;
};

// Fundamental-matrix (linear shooting) solve: integrate a full fundamental
// matrix Phi (Phi(0) = basis) plus one particular solution by RK4, then
// match the boundary operator with one dim x dim linear solve whose
// condition number is recorded. Throws SolverError("NCE singular ...") when
// the matching matrix is numerically singular and SolverError("NCE
// unstable, refine grid or shrink T") on overflow during integration.
BvpSolution solve_linear_bvp(const LinearBvpSystem& system, const TimeGrid& grid,
                             const Eigen::MatrixXd& basis = Eigen::MatrixXd());

struct BvpResidual {
  Eigen::VectorXd interior_max;    // per equation, central differences
  Eigen::VectorXd boundary_defect; // |L_init Y(0) + L_term Y(T) - c| per row
};

BvpResidual bvp_residual(const BvpSolution& sol, const LinearBvpSystem& system);

}  // namespace mmlqg

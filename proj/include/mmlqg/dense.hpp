#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mmlqg/errors.hpp"
#include "mmlqg/grid.hpp"

namespace mmlqg {

// Deterministic trajectories are computed by the classical 4-stage
// Runge-Kutta method on dyadic refinements of the shared time grid. A
// solve at level L takes M*2^L steps and samples its time-varying inputs at
// level L+1, so every stage time (node, midpoint, node) lands exactly on a
// stored node of the input. The producer levels below leave each consumer
// one level of headroom:
//
//   riccati (4)  ->  NCE fundamental matrix (3)  ->  perturbed-major
//   backward ODEs (2)  ->  deviation response BVPs (1)  ->  simulation,
//   moments, re-integration checks, quadrature (0).
inline constexpr int kLevelBase = 0;
inline constexpr int kLevelResponse = 1;
inline constexpr int kLevelMajorDev = 2;
inline constexpr int kLevelNce = 3;
inline constexpr int kLevelRiccati = 4;

inline int steps_at_level(const TimeGrid& grid, int level) {
  return grid.M << level;
}

// One scalar trajectory stored on a level-`level` refinement of `grid`.
// Readable at any coarser level by striding.
struct DenseSeries {
  TimeGrid grid;
  int level = 0;
  std::vector<double> values;

  double at(int query_level, std::int64_t idx) const {
    return values[static_cast<std::size_t>(idx << (level - query_level))];
  }
  double node(int j) const { return at(0, j); }

  // Copies of the public-grid node values (M+1 entries).
  std::vector<double> node_values() const {
    std::vector<double> out(grid.M + 1);
    for (int j = 0; j <= grid.M; ++j) out[j] = node(j);
    return out;
  }
};

// Right-hand side sampled at stage indices on the (level+1) refinement:
// rhs(stage_idx, y, dy).
using OdeRhs =
    std::function<void(std::int64_t, const Eigen::VectorXd&, Eigen::VectorXd&)>;

namespace detail {

inline void check_state(const Eigen::VectorXd& y, double cap,
                        const char* overflow_error) {
  if (!y.allFinite() || y.cwiseAbs().maxCoeff() > cap) {
    throw SolverError(overflow_error);
  }
}

}  // namespace detail

// Integrates dy/dt = rhs forward from y(0) = y0 over the level-`level`
// refinement of `grid`, storing every node as a column. Throws SolverError
// with `overflow_error` if the state leaves [-cap, cap] or turns non-finite.
Eigen::MatrixXd integrate_forward(const TimeGrid& grid, int level,
                                  const Eigen::VectorXd& y0, const OdeRhs& rhs,
                                  double cap, const char* overflow_error);

// Same, but backward from y(T) = yT; column j still holds the value at node j.
Eigen::MatrixXd integrate_backward(const TimeGrid& grid, int level,
                                   const Eigen::VectorXd& yT, const OdeRhs& rhs,
                                   double cap, const char* overflow_error);

// Scalar convenience wrappers returning a DenseSeries.
DenseSeries integrate_forward_scalar(const TimeGrid& grid, int level, double y0,
                                     const std::function<double(std::int64_t, double)>& rhs,
                                     double cap, const char* overflow_error);
DenseSeries integrate_backward_scalar(const TimeGrid& grid, int level, double yT,
                                      const std::function<double(std::int64_t, double)>& rhs,
                                      double cap, const char* overflow_error);

// Trapezoid rule over the public grid: sum of w_j f(j) with end weights h/2.
double trapezoid(const TimeGrid& grid, const std::function<double(int)>& f);

// Composite Simpson rule over the public grid (M must be even). Used only
// where the O(h^2) trapezoid bias would mask a first-order stationarity test.
double simpson(const TimeGrid& grid, const std::function<double(int)>& f);

}  // namespace mmlqg

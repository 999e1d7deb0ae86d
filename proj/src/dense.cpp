#include "mmlqg/dense.hpp"

namespace mmlqg {

namespace {

enum class Direction { kForward, kBackward };

Eigen::MatrixXd integrate(const TimeGrid& grid, int level,
                          const Eigen::VectorXd& y_start, const OdeRhs& rhs,
                          double cap, const char* overflow_error,
                          Direction dir) {
  const int steps = steps_at_level(grid, level);
  const double h =
      (dir == Direction::kForward ? 1.0 : -1.0) * grid.T / steps;
  const auto dim = y_start.size();

  Eigen::MatrixXd table(dim, steps + 1);
  Eigen::VectorXd y = y_start;
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

  const int first = dir == Direction::kForward ? 0 : steps;
  const int last = dir == Direction::kForward ? steps : 0;
  const int inc = dir == Direction::kForward ? 1 : -1;

  table.col(first) = y;
  for (int i = first; i != last; i += inc) {
    // Stage times land on the (level+1) refinement: 2i, 2i+inc, 2i+2*inc.
    const std::int64_t s0 = 2 * static_cast<std::int64_t>(i);
    rhs(s0, y, k1);
    tmp = y + 0.5 * h * k1;
    rhs(s0 + inc, tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(s0 + inc, tmp, k3);
    tmp = y + h * k3;
    rhs(s0 + 2 * inc, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    detail::check_state(y, cap, overflow_error);
    table.col(i + inc) = y;
  }
  return table;
}

OdeRhs wrap_scalar(const std::function<double(std::int64_t, double)>& rhs) {
  return [rhs](std::int64_t s, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy[0] = rhs(s, y[0]);
  };
}

DenseSeries to_series(const TimeGrid& grid, int level,
                      const Eigen::MatrixXd& table) {
  DenseSeries out;
  out.grid = grid;
  out.level = level;
  out.values.assign(table.data(), table.data() + table.cols());
  return out;
}

}  // namespace

Eigen::MatrixXd integrate_forward(const TimeGrid& grid, int level,
                                  const Eigen::VectorXd& y0, const OdeRhs& rhs,
                                  double cap, const char* overflow_error) {
  return integrate(grid, level, y0, rhs, cap, overflow_error,
                   Direction::kForward);
}

Eigen::MatrixXd integrate_backward(const TimeGrid& grid, int level,
                                   const Eigen::VectorXd& yT, const OdeRhs& rhs,
                                   double cap, const char* overflow_error) {
  return integrate(grid, level, yT, rhs, cap, overflow_error,
                   Direction::kBackward);
}

DenseSeries integrate_forward_scalar(
    const TimeGrid& grid, int level, double y0,
    const std::function<double(std::int64_t, double)>& rhs, double cap,
    const char* overflow_error) {
  Eigen::VectorXd v(1);
  v[0] = y0;
  return to_series(grid, level,
                   integrate_forward(grid, level, v, wrap_scalar(rhs), cap,
                                     overflow_error));
}

DenseSeries integrate_backward_scalar(
    const TimeGrid& grid, int level, double yT,
    const std::function<double(std::int64_t, double)>& rhs, double cap,
    const char* overflow_error) {
  Eigen::VectorXd v(1);
  v[0] = yT;
  return to_series(grid, level,
                   integrate_backward(grid, level, v, wrap_scalar(rhs), cap,
                                      overflow_error));
}

double trapezoid(const TimeGrid& grid, const std::function<double(int)>& f) {
  const double h = grid.step();
  double acc = 0.5 * (f(0) + f(grid.M));
  for (int j = 1; j < grid.M; ++j) acc += f(j);
  return h * acc;
}

double simpson(const TimeGrid& grid, const std::function<double(int)>& f) {
  if (grid.M % 2 != 0) {
    throw UsageError("simpson: grid size must be even");
  }
  const double h = grid.step();
  double acc = f(0) + f(grid.M);
  for (int j = 1; j < grid.M; j += 2) acc += 4.0 * f(j);
  for (int j = 2; j < grid.M; j += 2) acc += 2.0 * f(j);
  return h / 3.0 * acc;
}

}  // namespace mmlqg

#pragma once

#include <cstdint>

namespace mmlqg {

// Uniform partition of [0, T] into M steps, t_j = j*T/M.
struct TimeGrid {
  double T = 1.0;
  int M = 0;

  double step() const { return T / M; }
  int nodes() const { return M + 1; }
  double t(int j) const { return T * static_cast<double>(j) / M; }

  bool operator==(const TimeGrid&) const = default;
};

// Throws UsageError unless T > 0 and M >= 2.
TimeGrid build_time_grid(double T, int M);

}  // namespace mmlqg

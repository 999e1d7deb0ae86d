#include "mmlqg/grid.hpp"

#include <string>

#include "mmlqg/errors.hpp"

namespace mmlqg {

TimeGrid build_time_grid(double T, int M) {
  if (!(T > 0.0)) {
    throw UsageError("time grid: T must be > 0, got " + std::to_string(T));
  }
  if (M < 2) {
    throw UsageError("time grid: M must be >= 2, got " + std::to_string(M));
  }
  return TimeGrid{T, M};
}

}  // namespace mmlqg

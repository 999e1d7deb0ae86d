#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace mmlqg {

// Neumaier-compensated accumulator. Summation order is always a fixed
// function of the data layout, never of thread scheduling, so aggregated
// statistics are bit-identical across worker counts.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_total(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard error of the mean; 0 when n < 2
};

// Two-pass mean and standard error over a fixed-order vector.
MeanSe mean_se(const std::vector<double>& xs);

// Paths are processed in fixed blocks of this size; per-block partial
// results are merged in block order, making reductions independent of how
// blocks were distributed over threads.
inline constexpr int kPathBlock = 64;

inline int path_block_count(int n_paths) {
  return (n_paths + kPathBlock - 1) / kPathBlock;
}

// Runs fn(block, path_begin, path_end) over all blocks using `workers`
// threads (0 = hardware concurrency). fn must write only to storage owned by
// its block or its paths.
void for_each_path_block(int n_paths, int workers,
                         const std::function<void(int, int, int)>& fn);

}  // namespace mmlqg

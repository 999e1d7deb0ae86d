#include "mmlqg/accumulate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace mmlqg {

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  out.mean = compensated_total(xs) / static_cast<double>(n);
  if (n < 2) return out;
  CompensatedSum sq;
  for (double x : xs) {
    const double d = x - out.mean;
    sq.add(d * d);
  }
  const double var = sq.value() / static_cast<double>(n - 1);
  out.se = std::sqrt(var / static_cast<double>(n));
  return out;
}

void for_each_path_block(int n_paths, int workers,
                         const std::function<void(int, int, int)>& fn) {
  const int blocks = path_block_count(n_paths);
  int n_workers = workers > 0
                      ? workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  if (n_workers > blocks) n_workers = blocks;

  auto run_block = [&](int blk) {
    const int begin = blk * kPathBlock;
    const int end = std::min(n_paths, begin + kPathBlock);
    fn(blk, begin, end);
  };

  if (n_workers == 1) {
    for (int blk = 0; blk < blocks; ++blk) run_block(blk);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (;;) {
        const int blk = next.fetch_add(1);
        if (blk >= blocks) return;
        run_block(blk);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mmlqg

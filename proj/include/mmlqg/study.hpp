#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmlqg/population.hpp"

namespace mmlqg {

// One population size of the convergence study. Gap columns estimate the
// mean-field approximation errors; strategy_gap couples each simulated minor
// with its limiting twin on the same noise stream.
struct ConvergenceRow {
  int N = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  double avg_gap_sq = 0.0, avg_gap_sq_se = 0.0;
  double j0_emp = 0.0, j0_se = 0.0, j0_bar = 0.0, cost_gap_major = 0.0;
  double ji_emp_mean = 0.0, ji_se = 0.0, ji_bar = 0.0, cost_gap_minor = 0.0;
  double strategy_gap = 0.0, strategy_gap_se = 0.0;
  double control_energy = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
};

// Per-N seeds derive from derive_seed(seed, "study", N); rows with solver
// failures carry the error in `status` instead of aborting the sweep.
ConvergenceTable run_convergence_study(const ValidatedParams& vp,
                                       const RiccatiSolution& riccati,
                                       const NceSolution& nce,
                                       const MomentTrajectory& moments,
                                       const std::vector<int>& N_list,
                                       int n_paths, std::uint64_t seed,
                                       int workers);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(value) against log(N). Throws UsageError when fewer
// than 3 rows are usable or any value is nonpositive.
SlopeFit fit_loglog_slope(const std::vector<int>& Ns,
                          const std::vector<double>& values);
SlopeFit fit_loglog_slope(const ConvergenceTable& table,
                          const std::string& column);

double table_column_value(const ConvergenceRow& row, const std::string& column);

}  // namespace mmlqg

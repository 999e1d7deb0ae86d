#include "mmlqg/study.hpp"

#include <cmath>
#include <stdexcept>

#include "mmlqg/errors.hpp"
#include "mmlqg/rng.hpp"

namespace mmlqg {

ConvergenceTable run_convergence_study(const ValidatedParams& vp,
                                       const RiccatiSolution& riccati,
                                       const NceSolution& nce,
                                       const MomentTrajectory& moments,
                                       const std::vector<int>& N_list,
                                       int n_paths, std::uint64_t seed,
                                       int workers) {
  if (N_list.empty()) {
    throw UsageError("convergence study: N_list must not be empty");
  }
  for (std::size_t i = 1; i < N_list.size(); ++i) {
    if (N_list[i] <= N_list[i - 1]) {
      throw UsageError("convergence study: N values must be strictly increasing");
    }
  }

  const Scenario base = equilibrium_scenario(vp, nce);
  ConvergenceTable table;
  for (int N : N_list) {
    ConvergenceRow row;
    row.N = N;
    row.n_paths = n_paths;
    row.seed = derive_seed(seed, "study", static_cast<std::uint64_t>(N));
    SimulationConfig cfg;
    cfg.N = N;
    cfg.n_paths = n_paths;
    cfg.seed = row.seed;
    cfg.workers = workers;
    cfg.twins = true;  // limiting twins on shared noise for the strategy gap
    try {
      const PopulationSample sample =
          simulate_population(vp, riccati, base, cfg);
      const CostReport costs =
          empirical_costs(sample, vp, riccati, nce, moments);
      row.avg_gap_sq = costs.avg_gap_sq;
      row.avg_gap_sq_se = costs.avg_gap_sq_se;
      row.j0_emp = costs.j0_emp;
      row.j0_se = costs.j0_se;
      row.j0_bar = costs.j0_bar;
      row.cost_gap_major = costs.gap_major;
      row.ji_emp_mean = costs.ji_emp_mean;
      row.ji_se = costs.ji_mean_se;
      row.ji_bar = costs.ji_bar;
      row.cost_gap_minor = costs.gap_minor;
      const MeanSe sg = mean_se(sample.path_strategy_gap);
      row.strategy_gap = sg.mean;
      row.strategy_gap_se = sg.se;
      row.control_energy = costs.control_energy;
    } catch (const SolverError& err) {
      row.status = err.what();
    }
    table.rows.push_back(row);
  }
  return table;
}

double table_column_value(const ConvergenceRow& row, const std::string& column) {
  if (column == "avg_gap_sq") return row.avg_gap_sq;
  if (column == "cost_gap_major") return row.cost_gap_major;
  if (column == "cost_gap_minor") return row.cost_gap_minor;
  if (column == "strategy_gap") return row.strategy_gap;
  if (column == "control_energy") return row.control_energy;
  throw UsageError("unknown convergence table column: " + column);
}

SlopeFit fit_loglog_slope(const std::vector<int>& Ns,
                          const std::vector<double>& values) {
  if (Ns.size() != values.size() || Ns.size() < 3) {
    throw UsageError("log-log fit: need at least 3 rows");
  }
  const std::size_t n = Ns.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0)) {
      throw UsageError("log-log fit: column values must be positive");
    }
    lx[i] = std::log(static_cast<double>(Ns[i]));
    ly[i] = std::log(values[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

SlopeFit fit_loglog_slope(const ConvergenceTable& table,
                          const std::string& column) {
  std::vector<int> Ns;
  std::vector<double> values;
  for (const auto& row : table.rows) {
    if (row.status != "ok") continue;
    Ns.push_back(row.N);
    values.push_back(table_column_value(row, column));
  }
  return fit_loglog_slope(Ns, values);
}

}  // namespace mmlqg

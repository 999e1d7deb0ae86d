#include "mmlqg/reports.hpp"

#include "mmlqg/csv.hpp"
#include "mmlqg/errors.hpp"

namespace mmlqg {

std::string riccati_csv(const RiccatiSolution& sol) {
  CsvWriter w({"t", "P"});
  for (int j = 0; j <= sol.grid.M; ++j) {
    w.begin_row();
    w.add(sol.grid.t(j));
    w.add(sol.at(j));
    w.end_row();
  }
  return w.str();
}

std::string nce_csv(const NceSolution& sol, const ValidatedParams& vp) {
  CsvWriter w({"t", "x0_hat", "xbar", "k", "p0", "p", "q", "u0"});
  for (int j = 0; j <= sol.grid.M; ++j) {
    w.begin_row();
    w.add(sol.grid.t(j));
    w.add(sol.x0_hat.node(j));
    w.add(sol.xbar.node(j));
    w.add(sol.k.node(j));
    w.add(sol.p0.node(j));
    w.add(sol.p.node(j));
    w.add(sol.q.node(j));
    w.add(sol.u0_node(j, vp));
    w.end_row();
  }
  return w.str();
}

std::string moments_csv(const MomentTrajectory& moments) {
  CsvWriter w({"t", "mu", "v"});
  for (int j = 0; j <= moments.grid.M; ++j) {
    w.begin_row();
    w.add(moments.grid.t(j));
    w.add(moments.mu.node(j));
    w.add(moments.v.node(j));
    w.end_row();
  }
  return w.str();
}

std::string costs_csv(const CostReport& r) {
  CsvWriter w({"N", "n_paths", "seed", "J0_emp", "J0_bar", "Ji_emp_mean",
               "Ji_bar", "gap_major", "gap_minor", "avg_gap_sq", "se_J0_emp",
               "se_Ji_emp_mean", "se_avg_gap_sq", "control_energy"});
  w.begin_row();
  w.add(r.N);
  w.add(r.n_paths);
  w.add(static_cast<unsigned long long>(r.seed));
  w.add(r.j0_emp);
  w.add(r.j0_bar);
  w.add(r.ji_emp_mean);
  w.add(r.ji_bar);
  w.add(r.gap_major);
  w.add(r.gap_minor);
  w.add(r.avg_gap_sq);
  w.add(r.j0_se);
  w.add(r.ji_mean_se);
  w.add(r.avg_gap_sq_se);
  w.add(r.control_energy);
  w.end_row();
  return w.str();
}

std::string gap_csv(const std::vector<GapReport>& reports, int n_paths,
                    const std::vector<std::uint64_t>& seeds) {
  if (reports.size() != seeds.size()) {
    throw UsageError("gap_csv: one seed per report required");
  }
  CsvWriter w({"target", "kind", "theta", "window", "N", "n_paths", "seed",
               "J_base", "J_dev", "delta", "se", "epsilon_hat"});
  for (std::size_t r = 0; r < reports.size(); ++r) {
    for (const auto& e : reports[r].entries) {
      w.begin_row();
      w.add(std::string(e.spec.target == DeviationTarget::kMajor ? "major"
                                                                 : "minor"));
      w.add(std::string(e.spec.kind == DeviationKind::kFeedbackScale
                            ? "feedback-scale"
                        : e.spec.kind == DeviationKind::kConstantOffset
                            ? "constant-offset"
                            : "time-window-pulse"));
      w.add(e.spec.theta);
      if (e.spec.kind == DeviationKind::kTimePulse) {
        w.add(CsvWriter::format_double(e.spec.window_lo) + ":" +
              CsvWriter::format_double(e.spec.window_hi));
      } else {
        w.add(std::string("-"));
      }
      w.add(e.N);
      w.add(n_paths);
      w.add(static_cast<unsigned long long>(seeds[r]));
      w.add(e.j_base);
      w.add(e.j_dev);
      w.add(e.delta);
      w.add(e.se);
      w.add(reports[r].epsilon_hat);
      w.end_row();
    }
  }
  return w.str();
}

std::string convergence_csv(const ConvergenceTable& table) {
  CsvWriter w({"N", "n_paths", "seed", "status", "avg_gap_sq", "se_avg_gap_sq",
               "J0_emp", "se_J0_emp", "J0_bar", "cost_gap_major",
               "Ji_emp_mean", "se_Ji_emp_mean", "Ji_bar", "cost_gap_minor",
               "strategy_gap", "se_strategy_gap", "control_energy"});
  for (const auto& r : table.rows) {
    w.begin_row();
    w.add(r.N);
    w.add(r.n_paths);
    w.add(static_cast<unsigned long long>(r.seed));
    w.add(r.status);
    w.add(r.avg_gap_sq);
    w.add(r.avg_gap_sq_se);
    w.add(r.j0_emp);
    w.add(r.j0_se);
    w.add(r.j0_bar);
    w.add(r.cost_gap_major);
    w.add(r.ji_emp_mean);
    w.add(r.ji_se);
    w.add(r.ji_bar);
    w.add(r.cost_gap_minor);
    w.add(r.strategy_gap);
    w.add(r.strategy_gap_se);
    w.add(r.control_energy);
    w.end_row();
  }
  return w.str();
}

std::string paths_csv(const PopulationSample& sample) {
  if (sample.minor_states.empty()) {
    throw UsageError("paths_csv: sample was run without path retention");
  }
  CsvWriter w({"path", "player", "t", "x"});
  const int M = sample.grid.M;
  for (int p = 0; p < sample.n_paths; ++p) {
    for (int i = 0; i < sample.N; ++i) {
      const std::size_t base =
          (static_cast<std::size_t>(p) * sample.N + i) * (M + 1);
      for (int j = 0; j <= M; ++j) {
        w.begin_row();
        w.add(p);
        w.add(i);
        w.add(sample.grid.t(j));
        w.add(sample.minor_states[base + j]);
        w.end_row();
      }
    }
  }
  return w.str();
}

}  // namespace mmlqg

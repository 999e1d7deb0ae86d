#include <doctest.h>

#include <cmath>

#include "mmlqg/errors.hpp"
#include "mmlqg/reports.hpp"
#include "mmlqg/rng.hpp"
#include "mmlqg/study.hpp"

using namespace mmlqg;

namespace {

ModelParams coupled_params() {
  ModelParams p;
  p.A0 = 0.4;
  p.B0 = 1.0;
  p.A = -0.3;
  p.B = 1.0;
  p.D = 0.25;
  p.alpha = 0.35;
  p.sigma = 0.45;
  p.Q0 = 0.8;
  p.R0 = 1.0;
  p.H0 = 0.6;
  p.Q = 0.9;
  p.R = 1.0;
  p.H = 0.5;
  p.T = 1.0;
  p.xi = 1.4;
  p.x_mean = 0.6;
  p.x_var = 0.16;
  return p;
}

struct Solved {
  ValidatedParams vp;
  RiccatiSolution riccati;
  NceSolution nce;
  MomentTrajectory moments;
};

Solved solve_all(const ModelParams& p, int M) {
  ValidatedParams vp = require_valid(p);
  RiccatiSolution riccati = solve_riccati(vp, build_time_grid(p.T, M));
  NceSolution nce = solve_nce(vp, riccati);
  MomentTrajectory moments = solve_moments(vp, riccati, nce);
  return Solved{vp, std::move(riccati), std::move(nce), std::move(moments)};
}

}  // namespace

TEST_CASE("synthetic 1/N data fits slope -1 to 1e-12") {
  const std::vector<int> Ns = {8, 32, 128, 512};
  std::vector<double> v;
  for (int N : Ns) v.push_back(1.0 / N);
  const SlopeFit f = fit_loglog_slope(Ns, v);
  CHECK(std::abs(f.slope + 1.0) < 1e-12);
  CHECK(f.r_squared == doctest::Approx(1.0));
}

TEST_CASE("synthetic 1/sqrt(N) data fits slope -0.5") {
  const std::vector<int> Ns = {8, 32, 128, 512};
  std::vector<double> v;
  for (int N : Ns) v.push_back(1.0 / std::sqrt(static_cast<double>(N)));
  const SlopeFit f = fit_loglog_slope(Ns, v);
  CHECK(std::abs(f.slope + 0.5) < 1e-12);
}

TEST_CASE("nonpositive values and short tables are rejected") {
  CHECK_THROWS_AS(fit_loglog_slope({8, 32, 128}, {1.0, 0.0, 0.1}), UsageError);
  CHECK_THROWS_AS(fit_loglog_slope({8, 32, 128}, {1.0, -0.1, 0.1}),
                  UsageError);
  CHECK_THROWS_AS(fit_loglog_slope({8, 32}, {1.0, 0.5}), UsageError);
}

TEST_CASE("unknown table columns are rejected") {
  ConvergenceRow row;
  CHECK_THROWS_AS(table_column_value(row, "nope"), UsageError);
  CHECK(table_column_value(row, "avg_gap_sq") == 0.0);
}

TEST_CASE("study requires strictly increasing N values") {
  const Solved s = solve_all(coupled_params(), 50);
  CHECK_THROWS_AS(run_convergence_study(s.vp, s.riccati, s.nce, s.moments,
                                        {8, 8}, 10, 1, 1),
                  UsageError);
  CHECK_THROWS_AS(run_convergence_study(s.vp, s.riccati, s.nce, s.moments, {},
                                        10, 1, 1),
                  UsageError);
}

TEST_CASE("study rows carry derived seeds and nonnegative statistics") {
  const Solved s = solve_all(coupled_params(), 100);
  const ConvergenceTable t = run_convergence_study(
      s.vp, s.riccati, s.nce, s.moments, {4, 8, 16}, 50, 777, 0);
  REQUIRE(t.rows.size() == 3);
  for (const auto& row : t.rows) {
    CHECK(row.status == "ok");
    CHECK(row.seed == derive_seed(777, "study",
                                  static_cast<std::uint64_t>(row.N)));
    CHECK(row.avg_gap_sq >= 0.0);
    CHECK(row.cost_gap_major >= 0.0);
    CHECK(row.cost_gap_minor >= 0.0);
    CHECK(row.strategy_gap >= 0.0);
    CHECK(row.control_energy > 0.0);
    CHECK(row.n_paths == 50);
  }
  // the average gap falls with N even on a small run
  CHECK(t.rows.front().avg_gap_sq > t.rows.back().avg_gap_sq);
}

TEST_CASE("deterministic inert population has vanishing gap columns") {
  // A = D = alpha = 0 with Q = H = 0 makes P = k = 0 and the minors exactly
  // constant, so empirical and limiting quantities coincide to rounding.
  ModelParams p = coupled_params();
  p.A = 0.0;
  p.D = 0.0;
  p.alpha = 0.0;
  p.Q = 0.0;
  p.H = 0.0;
  p.sigma = 0.0;
  p.x_var = 0.0;
  const Solved s = solve_all(p, 200);
  const ConvergenceTable t = run_convergence_study(
      s.vp, s.riccati, s.nce, s.moments, {4, 16}, 20, 3, 1);
  for (const auto& row : t.rows) {
    CHECK(row.avg_gap_sq < 1e-10);
    CHECK(row.cost_gap_major < 1e-10);
    CHECK(row.cost_gap_minor < 1e-10);
    CHECK(row.strategy_gap < 1e-10);
  }
}

TEST_CASE("convergence csv has the documented header and row count") {
  const Solved s = solve_all(coupled_params(), 50);
  const ConvergenceTable t = run_convergence_study(
      s.vp, s.riccati, s.nce, s.moments, {4, 8}, 10, 5, 1);
  const std::string csv = convergence_csv(t);
  CHECK(csv.rfind("N,n_paths,seed,status,avg_gap_sq,se_avg_gap_sq,J0_emp,"
                  "se_J0_emp,J0_bar,cost_gap_major,Ji_emp_mean,"
                  "se_Ji_emp_mean,Ji_bar,cost_gap_minor,strategy_gap,"
                  "se_strategy_gap,control_energy\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mmlqg/accumulate.hpp"
#include "mmlqg/errors.hpp"
#include "mmlqg/moments.hpp"
#include "mmlqg/population.hpp"

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

PopulationSample run(const Solved& s, SimulationConfig cfg) {
  return simulate_population(s.vp, s.riccati,
                             equilibrium_scenario(s.vp, s.nce), cfg);
}

}  // namespace

TEST_CASE("noiseless population tracks the mean field") {
  // Flat dynamics keep the explicit Euler error below 1e-6 at M = 2000.
  ModelParams p;
  p.A0 = 0.4;
  p.B0 = 1.0;
  p.A = 0.03;
  p.B = 1.0;
  p.R = 1.0;
  p.Q = 0.0;
  p.H = 0.0;
  p.Q0 = 0.5;
  p.R0 = 1.0;
  p.H0 = 0.0;
  p.D = 0.0;
  p.alpha = 0.0;
  p.sigma = 0.0;
  p.T = 1.0;
  p.xi = 0.0;
  p.x_mean = 1.0;
  p.x_var = 0.0;
  const Solved s = solve_all(p, 2000);
  SimulationConfig cfg;
  cfg.N = 4;
  cfg.n_paths = 1;
  cfg.seed = 1;
  cfg.retain_paths = true;
  const PopulationSample sample = run(s, cfg);
  double worst = 0.0;
  for (int j = 0; j <= 2000; ++j) {
    for (int i = 0; i < 4; ++i) {
      const double x = sample.minor_states[(0 * 4 + i) * 2001 + j];
      worst = std::max(worst, std::abs(x - s.nce.xbar.node(j)));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("stored state average is the exact mean of stored states") {
  const Solved s = solve_all(coupled_params(), 100);
  SimulationConfig cfg;
  cfg.N = 7;
  cfg.n_paths = 5;
  cfg.seed = 77;
  cfg.retain_paths = true;
  const PopulationSample sample = run(s, cfg);
  for (int p = 0; p < cfg.n_paths; ++p) {
    for (int j = 0; j <= 100; ++j) {
      CompensatedSum acc;
      for (int i = 0; i < cfg.N; ++i) {
        acc.add(sample.minor_states[(static_cast<std::size_t>(p) * 7 + i) *
                                        101 +
                                    j]);
      }
      const double avg = acc.value() / 7.0;
      CHECK(sample.state_average[static_cast<std::size_t>(p) * 101 + j] ==
            avg);
    }
  }
}

TEST_CASE("identical runs with 1 and 8 workers are bit-identical") {
  const Solved s = solve_all(coupled_params(), 200);
  SimulationConfig cfg;
  cfg.N = 4;
  cfg.n_paths = 200;  // several blocks
  cfg.seed = 2024;
  cfg.retain_paths = true;
  cfg.twins = true;
  cfg.workers = 1;
  const PopulationSample a = run(s, cfg);
  cfg.workers = 8;
  const PopulationSample b = run(s, cfg);
  CHECK(a.minor_states == b.minor_states);
  CHECK(a.state_average == b.state_average);
  CHECK(a.path_cost_major == b.path_cost_major);
  CHECK(a.path_cost_minor_mean == b.path_cost_minor_mean);
  CHECK(a.path_strategy_gap == b.path_strategy_gap);
  CHECK(a.player_cost_mean == b.player_cost_mean);
  CHECK(a.node_gap_mean == b.node_gap_mean);
}

TEST_CASE("single minor with D = 0 matches the moment oracle at T") {
  ModelParams p = coupled_params();
  p.D = 0.0;
  const Solved s = solve_all(p, 200);
  SimulationConfig cfg;
  cfg.N = 1;
  cfg.n_paths = 50000;
  cfg.seed = 5150;
  cfg.collect_terminal = true;
  const PopulationSample sample = run(s, cfg);

  const MeanSe m = mean_se(sample.terminal_states);
  const double mu_T = s.moments.mu.node(200);
  const double v_T = s.moments.v.node(200);
  CHECK(std::abs(m.mean - mu_T) < 3.0 * m.se + 2e-3);  // 2e-3 Euler headroom

  CompensatedSum sq;
  for (double x : sample.terminal_states) sq.add((x - m.mean) * (x - m.mean));
  const double var = sq.value() / (sample.terminal_states.size() - 1);
  const double var_se = var * std::sqrt(2.0 / sample.terminal_states.size());
  CHECK(std::abs(var - v_T) < 3.0 * var_se + 2e-3);
}

TEST_CASE("exchangeability: permuted noise streams leave statistics unchanged") {
  const Solved s = solve_all(coupled_params(), 100);
  SimulationConfig cfg;
  cfg.N = 6;
  cfg.n_paths = 40;
  cfg.seed = 31337;
  const PopulationSample base = run(s, cfg);
  cfg.player_stream_permutation = {3, 5, 0, 1, 4, 2};
  const PopulationSample perm = run(s, cfg);
  for (int p = 0; p < cfg.n_paths; ++p) {
    CHECK(perm.path_cost_minor_mean[p] ==
          doctest::Approx(base.path_cost_minor_mean[p]).epsilon(1e-12));
    CHECK(perm.path_cost_major[p] ==
          doctest::Approx(base.path_cost_major[p]).epsilon(1e-12));
  }
  // player slot i of the permuted run reproduces player perm[i] of the base
  for (int i = 0; i < 6; ++i) {
    const int src = cfg.player_stream_permutation[i];
    CHECK(perm.player_cost_mean[i] ==
          doctest::Approx(base.player_cost_mean[src]).epsilon(1e-12));
  }
}

TEST_CASE("zero-data population has zero costs") {
  ModelParams p = coupled_params();
  p.xi = 0.0;
  p.x_mean = 0.0;
  p.x_var = 0.0;
  p.sigma = 0.0;
  const Solved s = solve_all(p, 100);
  SimulationConfig cfg;
  cfg.N = 8;
  cfg.n_paths = 10;
  cfg.seed = 9;
  const PopulationSample sample = run(s, cfg);
  const CostReport r = empirical_costs(sample, s.vp, s.riccati, s.nce,
                                       s.moments);
  CHECK(r.j0_emp == 0.0);
  CHECK(r.ji_emp_mean == 0.0);
  CHECK(r.avg_gap_sq == 0.0);
  CHECK(r.j0_bar == 0.0);
  CHECK(r.ji_bar == 0.0);
}

TEST_CASE("decoupled major with Q0 = 0 has a deterministic cost") {
  // With Q0 = 0 nothing random enters the major cost; with H0 = 0 as well
  // the adjoint vanishes and the cost is exactly H0 x0(0)^2 / 2 = 0.
  ModelParams p = coupled_params();
  p.alpha = 0.0;
  p.D = 0.0;
  p.Q0 = 0.0;
  p.H0 = 0.0;
  const Solved s0 = solve_all(p, 100);
  SimulationConfig cfg;
  cfg.N = 4;
  cfg.n_paths = 50;
  cfg.seed = 12;
  const MeanSe zero = mean_se(run(s0, cfg).path_cost_major);
  CHECK(zero.mean < 1e-30);
  CHECK(zero.se < 1e-30);

  // H0 > 0 keeps u0 alive but still deterministic: the cost is the control
  // energy plus the initial charge, identical on every path.
  p.H0 = 0.6;
  const Solved s = solve_all(p, 100);
  const PopulationSample sample = run(s, cfg);
  const MeanSe j0 = mean_se(sample.path_cost_major);
  const double energy = trapezoid(s.nce.grid, [&](int j) {
    const double u0 = s.nce.u0_node(j, s.vp);
    return p.R0 * u0 * u0;
  });
  const double expected =
      0.5 * energy +
      0.5 * p.H0 * s.nce.x0_hat.node(0) * s.nce.x0_hat.node(0);
  CHECK(j0.mean == doctest::Approx(expected).epsilon(1e-12));
  CHECK(j0.se < 1e-15);
}

TEST_CASE("pure-noise state-average gap matches (x_var + sigma^2 T)/N") {
  ModelParams p = coupled_params();
  p.A = 0.0;
  p.B = 0.0;
  p.D = 0.0;
  p.alpha = 0.0;
  p.sigma = 0.5;
  p.x_var = 0.09;
  const Solved s = solve_all(p, 50);
  SimulationConfig cfg;
  cfg.N = 16;
  cfg.n_paths = 4000;
  cfg.seed = 808;
  const PopulationSample sample = run(s, cfg);
  const GapStatistic g = state_average_gap(sample);
  const double expected = (p.x_var + p.sigma * p.sigma * p.T) / cfg.N;
  CHECK(std::abs(g.value - expected) < 3.0 * g.se);
  CHECK(g.argmax_node > 40);  // variance accumulates toward t = T
}

TEST_CASE("strategy gap is exactly zero when D = 0 and positive otherwise") {
  ModelParams p = coupled_params();
  p.D = 0.0;
  const Solved s0 = solve_all(p, 100);
  SimulationConfig cfg;
  cfg.N = 8;
  cfg.n_paths = 20;
  cfg.seed = 5;
  cfg.twins = true;
  const PopulationSample a = run(s0, cfg);
  for (double v : a.path_strategy_gap) CHECK(v == 0.0);

  const Solved s1 = solve_all(coupled_params(), 100);
  const PopulationSample b = run(s1, cfg);
  CHECK(mean_se(b.path_strategy_gap).mean > 0.0);
}

TEST_CASE("state cap violations raise 'simulation overflow'") {
  ModelParams p = coupled_params();
  const Solved s = solve_all(p, 100);
  SimulationConfig cfg;
  cfg.N = 2;
  cfg.n_paths = 4;
  cfg.seed = 3;
  cfg.state_cap = 1e-3;  // unreachable bound
  CHECK_THROWS_WITH_AS(run(s, cfg), doctest::Contains("simulation overflow"),
                       SolverError);
}

TEST_CASE("cost report SEs are positive for noisy runs") {
  const Solved s = solve_all(coupled_params(), 100);
  SimulationConfig cfg;
  cfg.N = 8;
  cfg.n_paths = 32;
  cfg.seed = 21;
  const PopulationSample sample = run(s, cfg);
  const CostReport r = empirical_costs(sample, s.vp, s.riccati, s.nce,
                                       s.moments);
  CHECK(r.j0_emp > 0.0);
  CHECK(r.ji_emp_mean > 0.0);
  CHECK(r.j0_se > 0.0);
  CHECK(r.ji_mean_se > 0.0);
  CHECK(r.avg_gap_sq > 0.0);
  CHECK(r.control_energy > 0.0);
  for (int i = 0; i < cfg.N; ++i) {
    CHECK(r.ji_emp[i] > 0.0);
    CHECK(r.ji_se[i] > 0.0);
  }
}

TEST_CASE("limiting mode with D = 0 coincides with the coupled run") {
  ModelParams p = coupled_params();
  p.D = 0.0;
  const Solved s = solve_all(p, 100);
  SimulationConfig cfg;
  cfg.N = 4;
  cfg.n_paths = 16;
  cfg.seed = 99;
  cfg.retain_paths = true;
  const PopulationSample coupled = run(s, cfg);
  Scenario limiting = equilibrium_scenario(s.vp, s.nce);
  limiting.couple_to_average = false;
  const PopulationSample lim =
      simulate_population(s.vp, s.riccati, limiting, cfg);
  CHECK(coupled.minor_states == lim.minor_states);
}

#include "mmlqg/population.hpp"

#include <cmath>
#include <cstdio>

#include "mmlqg/errors.hpp"
#include "mmlqg/rng.hpp"

namespace mmlqg {

bool DeviationSpec::is_null() const {
  switch (kind) {
    case DeviationKind::kFeedbackScale:
    case DeviationKind::kConstantOffset:
      return theta == 0.0;
    case DeviationKind::kTimePulse:
      return theta == 0.0 || window_hi <= window_lo;
  }
  return false;
}

std::string DeviationSpec::label() const {
  const char* kind_name = kind == DeviationKind::kFeedbackScale
                              ? "feedback-scale"
                          : kind == DeviationKind::kConstantOffset
                              ? "constant-offset"
                              : "time-window-pulse";
  char buf[96];
  if (kind == DeviationKind::kTimePulse) {
    std::snprintf(buf, sizeof(buf), "%s(%g,[%g,%g))", kind_name, theta,
                  window_lo, window_hi);
  } else {
    std::snprintf(buf, sizeof(buf), "%s(%g)", kind_name, theta);
  }
  return buf;
}

Scenario equilibrium_scenario(const ValidatedParams& vp,
                              const NceSolution& nce) {
  Scenario s;
  const DenseSeries x0 = nce.x0_hat;
  const DenseSeries k = nce.k;
  const DenseSeries xbar = nce.xbar;
  const DenseSeries p0 = nce.p0;
  const double u0_coef = -vp->B0 / vp->R0;
  s.major_state = [x0](int j) { return x0.node(j); };
  s.responder_offset = [k](int j) { return k.node(j); };
  s.mean_field = [xbar](int j) { return xbar.node(j); };
  s.major_control = [p0, u0_coef](int j) { return u0_coef * p0.node(j); };
  return s;
}

namespace {

// Arithmetic mean in fixed index order; shared by the engine and by tests
// that re-check the stored averages bit for bit.
double compensated_mean(const double* xs, int n) {
  CompensatedSum s;
  for (int i = 0; i < n; ++i) s.add(xs[i]);
  return s.value() / static_cast<double>(n);
}

struct NodeData {
  std::vector<double> P, k_resp, major, xbar, u0;
};

MeanSe block_stats(const std::vector<double>& sums,
                   const std::vector<double>& sqs, std::ptrdiff_t idx,
                   std::ptrdiff_t stride, int blocks, int n) {
  CompensatedSum total, total_sq;
  for (int blk = 0; blk < blocks; ++blk) {
    total.add(sums[blk * stride + idx]);
    total_sq.add(sqs[blk * stride + idx]);
  }
  MeanSe out;
  out.mean = total.value() / n;
  if (n > 1) {
    double var =
        (total_sq.value() - n * out.mean * out.mean) / (n - 1);
    if (var < 0.0) var = 0.0;
    out.se = std::sqrt(var / n);
  }
  return out;
}

}  // namespace

PopulationSample simulate_population(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const Scenario& scenario,
                                     const SimulationConfig& cfg) {
  const ModelParams& mp = vp.get();
  const TimeGrid grid = riccati.grid;
  const int M = grid.M;
  const int N = cfg.N;
  const int n_paths = cfg.n_paths;
  if (N < 1) throw UsageError("simulate_population: N must be >= 1");
  if (n_paths < 1) throw UsageError("simulate_population: n_paths must be >= 1");
  if (cfg.tracked_player < 0 || cfg.tracked_player >= N) {
    throw UsageError("simulate_population: tracked player out of range");
  }
  if (scenario.minor_deviation &&
      (scenario.minor_deviation->player < 0 ||
       scenario.minor_deviation->player >= N)) {
    throw UsageError("simulate_population: deviating player out of range");
  }
  std::vector<int> stream_of(N);
  for (int i = 0; i < N; ++i) stream_of[i] = i;
  if (!cfg.player_stream_permutation.empty()) {
    if (static_cast<int>(cfg.player_stream_permutation.size()) != N) {
      throw UsageError("simulate_population: stream permutation size != N");
    }
    stream_of = cfg.player_stream_permutation;
  }

  const double h = grid.step();
  const double sqh = std::sqrt(h);
  const double fb = mp.B / mp.R;  // control = -fb (P x + k)
  const double x_sd = std::sqrt(mp.x_var);

  NodeData nd;
  nd.P.resize(M + 1);
  nd.k_resp.resize(M + 1);
  nd.major.resize(M + 1);
  nd.xbar.resize(M + 1);
  nd.u0.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    nd.P[j] = riccati.at(j);
    nd.k_resp[j] = scenario.responder_offset(j);
    nd.major[j] = scenario.major_state(j);
    nd.xbar[j] = scenario.mean_field(j);
    nd.u0[j] = scenario.major_control(j);
  }

  const int dev_player =
      scenario.minor_deviation ? scenario.minor_deviation->player : -1;
  const DeviationSpec dev_spec =
      scenario.minor_deviation ? scenario.minor_deviation->spec
                               : DeviationSpec{};

  PopulationSample out;
  out.grid = grid;
  out.N = N;
  out.n_paths = n_paths;
  out.seed = cfg.seed;
  out.tracked_player = cfg.tracked_player;
  out.major_initial = nd.major[0];
  out.path_cost_major.resize(n_paths);
  out.path_cost_minor_mean.resize(n_paths);
  out.path_cost_tracked.resize(n_paths);
  out.path_control_energy.resize(n_paths);
  if (cfg.twins) out.path_strategy_gap.resize(n_paths);
  if (cfg.collect_terminal) {
    out.terminal_states.resize(static_cast<std::size_t>(n_paths) * N);
  }
  if (cfg.retain_paths) {
    out.minor_states.resize(static_cast<std::size_t>(n_paths) * N * (M + 1));
    out.state_average.resize(static_cast<std::size_t>(n_paths) * (M + 1));
  }

  const int blocks = path_block_count(n_paths);
  std::vector<double> blk_gap_sum(static_cast<std::size_t>(blocks) * (M + 1), 0.0);
  std::vector<double> blk_gap_sq(static_cast<std::size_t>(blocks) * (M + 1), 0.0);
  std::vector<double> blk_cost_sum(static_cast<std::size_t>(blocks) * N, 0.0);
  std::vector<double> blk_cost_sq(static_cast<std::size_t>(blocks) * N, 0.0);

  auto run_block = [&](int blk, int begin, int end) {
    std::vector<double> x(N), xh(cfg.twins ? N : 0), zbuf(N);
    std::vector<double> cost(N), energy(N), sgap(N);
    double* gap_sum = blk_gap_sum.data() + static_cast<std::size_t>(blk) * (M + 1);
    double* gap_sq = blk_gap_sq.data() + static_cast<std::size_t>(blk) * (M + 1);
    double* cost_sum = blk_cost_sum.data() + static_cast<std::size_t>(blk) * N;
    double* cost_sq = blk_cost_sq.data() + static_cast<std::size_t>(blk) * N;

    for (int p = begin; p < end; ++p) {
      const auto path = static_cast<std::uint32_t>(p);
      for (int i = 0; i < N; ++i) {
        double x0i = mp.x_mean;
        if (x_sd > 0.0) {
          x0i += x_sd * normal_at(cfg.seed, kStreamInitialState, path,
                                  static_cast<std::uint32_t>(stream_of[i]), 0);
        }
        x[i] = x0i;
        if (cfg.twins) xh[i] = x0i;
        cost[i] = 0.0;
        energy[i] = 0.0;
        sgap[i] = 0.0;
      }
      double cost_major = 0.0;

      for (int j = 0; j <= M; ++j) {
        const double avg = compensated_mean(x.data(), N);
        if (cfg.retain_paths) {
          out.state_average[static_cast<std::size_t>(p) * (M + 1) + j] = avg;
          for (int i = 0; i < N; ++i) {
            out.minor_states[(static_cast<std::size_t>(p) * N + i) * (M + 1) +
                             j] = x[i];
          }
        }
        const double w = (j == 0 || j == M) ? 0.5 * h : h;
        const double ref = scenario.couple_to_average ? avg : nd.xbar[j];
        const double coupling = scenario.couple_to_average ? avg : nd.xbar[j];
        const double gdev = avg - nd.xbar[j];
        gap_sum[j] += gdev * gdev;
        gap_sq[j] += gdev * gdev * gdev * gdev;

        const double dev0 = nd.major[j] - ref;
        cost_major += w * (mp.Q0 * dev0 * dev0 + mp.R0 * nd.u0[j] * nd.u0[j]);

        const double t_j = grid.t(j);
        const bool update = j < M;
        for (int i = 0; i < N; ++i) {
          double u = -fb * (nd.P[j] * x[i] + nd.k_resp[j]);
          if (i == dev_player) u = dev_spec.apply(u, t_j);
          const double sdev = x[i] - ref;
          cost[i] += w * (mp.Q * sdev * sdev + mp.R * u * u);
          energy[i] += w * u * u;

          double uh = 0.0;
          if (cfg.twins) {
            uh = -fb * (nd.P[j] * xh[i] + nd.k_resp[j]);
            const double du = u - uh;
            if (du * du > sgap[i]) sgap[i] = du * du;
          }

          if (update) {
            double z = 0.0;
            if (mp.sigma != 0.0) {
              if ((j & 1) == 0) {
                const NormalPair pair =
                    normal_pair(cfg.seed, kStreamIncrements, path,
                                static_cast<std::uint32_t>(stream_of[i]),
                                static_cast<std::uint32_t>(j) >> 1);
                z = pair.z0;
                zbuf[i] = pair.z1;
              } else {
                z = zbuf[i];
              }
            }
            const double noise = mp.sigma * sqh * z;
            x[i] += (mp.A * x[i] + mp.B * u + mp.D * coupling +
                     mp.alpha * nd.major[j]) *
                        h +
                    noise;
            if (cfg.twins) {
              xh[i] += (mp.A * xh[i] + mp.B * uh + mp.D * nd.xbar[j] +
                        mp.alpha * nd.major[j]) *
                           h +
                       noise;
            }
            if (!(std::abs(x[i]) <= cfg.state_cap)) {
              throw SolverError(
                  "simulation overflow: |state| exceeded the cap; "
                  "unstable parameters or grid");
            }
          }
        }
      }

      cost_major = 0.5 * cost_major +
                   0.5 * mp.H0 * nd.major[0] * nd.major[0];
      out.path_cost_major[p] = cost_major;

      CompensatedSum path_cost, path_energy, path_sgap;
      for (int i = 0; i < N; ++i) {
        const double ci = 0.5 * cost[i] + 0.5 * mp.H * x[i] * x[i];
        cost_sum[i] += ci;
        cost_sq[i] += ci * ci;
        path_cost.add(ci);
        path_energy.add(energy[i]);
        if (cfg.twins) path_sgap.add(sgap[i]);
        if (i == cfg.tracked_player) out.path_cost_tracked[p] = ci;
        if (cfg.collect_terminal) {
          out.terminal_states[static_cast<std::size_t>(p) * N + i] = x[i];
        }
      }
      out.path_cost_minor_mean[p] = path_cost.value() / N;
      out.path_control_energy[p] = path_energy.value() / N;
      if (cfg.twins) out.path_strategy_gap[p] = path_sgap.value() / N;
    }
  };

  for_each_path_block(n_paths, cfg.workers, run_block);

  out.player_cost_mean.resize(N);
  out.player_cost_se.resize(N);
  for (int i = 0; i < N; ++i) {
    const MeanSe s = block_stats(blk_cost_sum, blk_cost_sq, i, N, blocks,
                                 n_paths);
    out.player_cost_mean[i] = s.mean;
    out.player_cost_se[i] = s.se;
  }
  out.node_gap_mean.resize(M + 1);
  out.node_gap_se.resize(M + 1);
  for (int j = 0; j <= M; ++j) {
    const MeanSe s = block_stats(blk_gap_sum, blk_gap_sq, j, M + 1, blocks,
                                 n_paths);
    out.node_gap_mean[j] = s.mean;
    out.node_gap_se[j] = s.se;
  }
  return out;
}

CostReport empirical_costs(const PopulationSample& sample,
                           const ValidatedParams& vp,
                           const RiccatiSolution& riccati,
                           const NceSolution& nce,
                           const MomentTrajectory& moments) {
  CostReport r;
  r.N = sample.N;
  r.n_paths = sample.n_paths;
  r.seed = sample.seed;

  const MeanSe j0 = mean_se(sample.path_cost_major);
  r.j0_emp = j0.mean;
  r.j0_se = j0.se;
  const MeanSe ji = mean_se(sample.path_cost_minor_mean);
  r.ji_emp_mean = ji.mean;
  r.ji_mean_se = ji.se;
  r.ji_emp = sample.player_cost_mean;
  r.ji_se = sample.player_cost_se;

  r.j0_bar = limiting_cost_major(vp, nce);
  r.ji_bar = limiting_cost_minor(vp, riccati, nce, moments);
  r.gap_major = std::abs(r.j0_emp - r.j0_bar);
  r.gap_minor = std::abs(r.ji_emp_mean - r.ji_bar);

  const GapStatistic g = state_average_gap(sample);
  r.avg_gap_sq = g.value;
  r.avg_gap_sq_se = g.se;
  r.control_energy = mean_se(sample.path_control_energy).mean;
  return r;
}

GapStatistic state_average_gap(const PopulationSample& sample) {
  GapStatistic g;
  for (int j = 0; j < static_cast<int>(sample.node_gap_mean.size()); ++j) {
    if (sample.node_gap_mean[j] > g.value) {
      g.value = sample.node_gap_mean[j];
      g.se = sample.node_gap_se[j];
      g.argmax_node = j;
    }
  }
  return g;
}

}  // namespace mmlqg

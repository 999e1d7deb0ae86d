#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mmlqg/accumulate.hpp"
#include "mmlqg/moments.hpp"
#include "mmlqg/nce.hpp"
#include "mmlqg/riccati.hpp"
#include "mmlqg/tolerances.hpp"

namespace mmlqg {

enum class DeviationKind { kFeedbackScale, kConstantOffset, kTimePulse };
enum class DeviationTarget { kMajor, kMinor };

// One element of the finite deviation family used for the equilibrium-gap
// estimate. feedback-scale multiplies the equilibrium control by (1+theta);
// constant-offset adds theta; time-window-pulse adds theta on [lo, hi).
struct DeviationSpec {
  DeviationKind kind = DeviationKind::kConstantOffset;
  DeviationTarget target = DeviationTarget::kMinor;
  double theta = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;

  double apply(double base_control, double t) const {
    switch (kind) {
      case DeviationKind::kFeedbackScale:
        return (1.0 + theta) * base_control;
      case DeviationKind::kConstantOffset:
        return base_control + theta;
      case DeviationKind::kTimePulse:
        return base_control +
               (t >= window_lo && t < window_hi ? theta : 0.0);
    }
    return base_control;
  }

  bool is_null() const;
  std::string label() const;
};

struct MinorDeviation {
  int player = 0;
  DeviationSpec spec;
};

// Deterministic inputs of one closed-loop population run, all sampled at
// public grid nodes. The equilibrium scenario couples every minor to the
// state average and to the solved major trajectory; deviation scenarios
// substitute the perturbed major, its response pair, or a deviating minor.
struct Scenario {
  std::function<double(int)> major_state;      // x0 path entering the drift
  std::function<double(int)> responder_offset; // k used in responder feedback
  std::function<double(int)> mean_field;       // comparator / limiting coupling
  std::function<double(int)> major_control;    // u0 entering the major cost
  bool couple_to_average = true;  // D * state-average vs D * mean_field
  std::optional<MinorDeviation> minor_deviation;
};

Scenario equilibrium_scenario(const ValidatedParams& vp, const NceSolution& nce);

struct SimulationConfig {
  int N = 1;
  int n_paths = 1;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  int tracked_player = 0;
  bool twins = false;             // co-simulate limiting twins on shared noise
  bool collect_terminal = false;  // keep x_i(T) per (path, player)
  bool retain_paths = false;      // keep full trajectories (small runs only)
  double state_cap = kDefaultStateCap;
  // Exchangeability probe: player slot i consumes the noise streams of
  // player_stream_permutation[i]. Empty = identity.
  std::vector<int> player_stream_permutation;
};

// Monte Carlo sample of the finite-N population under explicit
// Euler-Maruyama on the shared grid,
//   x_{j+1} = x_j + [A x + B u + D c_j + alpha major_j] h + sigma sqrt(h) z,
// with the state average recomputed before every increment and statistics
// streamed per path. Identical (params, N, n_paths, seed) give bit-identical
// results for any worker count.
struct PopulationSample {
  TimeGrid grid;
  int N = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  int tracked_player = 0;

  // Per-path statistics, fixed path order.
  std::vector<double> path_cost_major;
  std::vector<double> path_cost_minor_mean;
  std::vector<double> path_cost_tracked;
  std::vector<double> path_control_energy;   // player-mean of trapz u^2
  std::vector<double> path_strategy_gap;     // twins: player-mean sup_t (u-u_lim)^2

  // Per-player cost over paths.
  std::vector<double> player_cost_mean;
  std::vector<double> player_cost_se;

  // Per-node path-mean and SE of (average - mean_field)^2.
  std::vector<double> node_gap_mean;
  std::vector<double> node_gap_se;

  // Optional raw data.
  std::vector<double> terminal_states;  // [path*N + player]
  std::vector<double> minor_states;     // [(path*N + player)*(M+1) + node]
  std::vector<double> state_average;    // [path*(M+1) + node]

  double major_initial = 0.0;  // major_state(0), for the H0 cost term
};

PopulationSample simulate_population(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const Scenario& scenario,
                                     const SimulationConfig& cfg);

struct CostReport {
  int N = 0;
  int n_paths = 0;
  std::uint64_t seed = 0;
  double j0_emp = 0.0, j0_se = 0.0;
  std::vector<double> ji_emp, ji_se;
  double ji_emp_mean = 0.0, ji_mean_se = 0.0;
  double j0_bar = 0.0, ji_bar = 0.0;
  double gap_major = 0.0, gap_minor = 0.0;
  double avg_gap_sq = 0.0, avg_gap_sq_se = 0.0;
  double control_energy = 0.0;
};

CostReport empirical_costs(const PopulationSample& sample,
                           const ValidatedParams& vp,
                           const RiccatiSolution& riccati,
                           const NceSolution& nce,
                           const MomentTrajectory& moments);

struct GapStatistic {
  double value = 0.0;
  double se = 0.0;
  int argmax_node = 0;
};

// sup over nodes of the path-mean of (state-average - mean-field)^2.
GapStatistic state_average_gap(const PopulationSample& sample);

}  // namespace mmlqg

#include "mmlqg/nash.hpp"

#include <algorithm>
#include <cmath>

#include "mmlqg/errors.hpp"
#include "mmlqg/rng.hpp"
#include "mmlqg/tolerances.hpp"

namespace mmlqg {

namespace {

DenseSeries to_series(const TimeGrid& grid, int level,
                      const Eigen::MatrixXd& row_table, int row) {
  DenseSeries s;
  s.grid = grid;
  s.level = level;
  s.values.resize(row_table.cols());
  for (Eigen::Index i = 0; i < row_table.cols(); ++i) {
    s.values[i] = row_table(row, i);
  }
  return s;
}

// Backward solve of the perturbed major state
//   l0' = A0 l0 + B0 u0(t), l0(T) = xi,
// at kLevelMajorDev; `control` is sampled at kLevelNce stage indices.
DenseSeries solve_perturbed_major(const ValidatedParams& vp,
                                  const TimeGrid& grid,
                                  const std::function<double(std::int64_t)>& control) {
  const ModelParams& p = vp.get();
  auto rhs = [&](std::int64_t s, double l0) {
    return p.A0 * l0 + p.B0 * control(s);
  };
  return integrate_backward_scalar(grid, kLevelMajorDev, p.xi, rhs,
                                   kDefaultStateCap,
                                   "NCE unstable, refine grid or shrink T");
}

// Response pair (k', xbar') to a given major trajectory, as a 2-dimensional
// BVP at kLevelResponse.
BvpSolution solve_response_pair(const ValidatedParams& vp,
                                const RiccatiSolution& riccati,
                                const DenseSeries& l0) {
  const ModelParams& p = vp.get();
  const TimeGrid grid = riccati.grid;
  const double b = vp.minor_gain();
  const DenseSeries P = riccati.P;

  LinearBvpSystem sys;
  sys.dim = 2;
  sys.level = kLevelResponse;
  sys.drift = [p, b, P](std::int64_t s, Eigen::MatrixXd& m) {
    const double Pt = P.at(kLevelMajorDev, s);
    m(0, 0) = -p.A + b * Pt;      // k' row
    m(0, 1) = p.Q - p.D * Pt;
    m(1, 0) = -b;                 // xbar' row
    m(1, 1) = p.A + p.D - b * Pt;
  };
  sys.forcing = [p, P, l0](std::int64_t s, Eigen::VectorXd& g) {
    const double Pt = P.at(kLevelMajorDev, s);
    const double l = l0.at(kLevelMajorDev, s);
    g(0) = -p.alpha * Pt * l;
    g(1) = p.alpha * l;
  };
  sys.boundary_initial = Eigen::MatrixXd::Zero(2, 2);
  sys.boundary_terminal = Eigen::MatrixXd::Zero(2, 2);
  sys.boundary_values = Eigen::VectorXd::Zero(2);
  sys.boundary_terminal(0, 0) = 1.0;  // k'(T) = 0
  sys.boundary_initial(1, 1) = 1.0;   // xbar'(0) = x_mean
  sys.boundary_values(1) = p.x_mean;
  return solve_linear_bvp(sys, grid);
}

GapEntry paired_entry(const DeviationSpec& spec, int N,
                      const std::vector<double>& base,
                      const std::vector<double>& dev) {
  GapEntry e;
  e.spec = spec;
  e.N = N;
  e.j_base = mean_se(base).mean;
  e.j_dev = mean_se(dev).mean;
  std::vector<double> diff(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) diff[i] = dev[i] - base[i];
  const MeanSe d = mean_se(diff);
  e.delta = d.mean;
  e.se = d.se;
  return e;
}

void check_base(const PopulationSample& base, const SimulationConfig& cfg) {
  if (base.N != cfg.N || base.n_paths != cfg.n_paths ||
      base.seed != cfg.seed) {
    throw UsageError("deviation run: base sample does not match (N, n_paths, "
                     "seed) of the requested run");
  }
}

}  // namespace

MajorDeviationSystem build_major_deviation(const ValidatedParams& vp,
                                           const RiccatiSolution& riccati,
                                           const NceSolution& nce,
                                           const DeviationSpec& spec,
                                           ResponderMode mode) {
  const ModelParams& p = vp.get();
  const TimeGrid grid = riccati.grid;
  const double u0_coef = -p.B0 / p.R0;
  const DenseSeries p0 = nce.p0;

  auto control_at_stage = [p0, u0_coef, spec, grid](std::int64_t s) {
    const double t =
        grid.T * static_cast<double>(s) / steps_at_level(grid, kLevelNce);
    return spec.apply(u0_coef * p0.at(kLevelNce, s), t);
  };

  MajorDeviationSystem sys;
  sys.l0 = solve_perturbed_major(vp, grid, control_at_stage);
  sys.control = [p0, u0_coef, spec](double t, int node) {
    return spec.apply(u0_coef * p0.node(node), t);
  };

  if (mode == ResponderMode::kRecomputed) {
    const BvpSolution resp = solve_response_pair(vp, riccati, sys.l0);
    sys.k_used = to_series(grid, kLevelResponse, resp.trajectory, 0);
    sys.xbar_response = to_series(grid, kLevelResponse, resp.trajectory, 1);
  } else {
    sys.k_used = nce.k;
    const double b = vp.minor_gain();
    const DenseSeries& P = riccati.P;
    const DenseSeries& k = nce.k;
    const DenseSeries& l0 = sys.l0;
    auto rhs = [&p, b, &P, &k, &l0](std::int64_t s, double x) {
      const double Pt = P.at(kLevelMajorDev, s);
      return (p.A + p.D - b * Pt) * x - b * k.at(kLevelMajorDev, s) +
             p.alpha * l0.at(kLevelMajorDev, s);
    };
    sys.xbar_response = integrate_forward_scalar(
        grid, kLevelResponse, p.x_mean, rhs, kDefaultStateCap,
        "NCE unstable, refine grid or shrink T");
  }
  return sys;
}

GapEntry deviate_major(const ValidatedParams& vp, const RiccatiSolution& riccati,
                       const NceSolution& nce, const DeviationSpec& spec,
                       const PopulationSample& base, const SimulationConfig& cfg,
                       ResponderMode mode) {
  check_base(base, cfg);

  if (spec.is_null()) {
    // A null deviation leaves the optimality system unchanged, so the
    // equilibrium trajectories are reused and only the simulation is redone
    // on the same streams; the paired delta is exactly zero by construction.
    SimulationConfig run = cfg;
    run.twins = false;
    const PopulationSample dev =
        simulate_population(vp, riccati, equilibrium_scenario(vp, nce), run);
    return paired_entry(spec, cfg.N, base.path_cost_major,
                        dev.path_cost_major);
  }

  const MajorDeviationSystem sys =
      build_major_deviation(vp, riccati, nce, spec, mode);

  Scenario sc;
  const DenseSeries l0 = sys.l0;
  const DenseSeries k_used = sys.k_used;
  const DenseSeries xbar = sys.xbar_response;
  const auto control = sys.control;
  const TimeGrid grid = riccati.grid;
  sc.major_state = [l0](int j) { return l0.node(j); };
  sc.responder_offset = [k_used](int j) { return k_used.node(j); };
  sc.mean_field = [xbar](int j) { return xbar.node(j); };
  sc.major_control = [control, grid](int j) { return control(grid.t(j), j); };

  SimulationConfig run = cfg;
  run.twins = false;
  const PopulationSample dev = simulate_population(vp, riccati, sc, run);
  return paired_entry(spec, cfg.N, base.path_cost_major, dev.path_cost_major);
}

GapEntry deviate_minor(const ValidatedParams& vp, const RiccatiSolution& riccati,
                       const NceSolution& nce, const DeviationSpec& spec,
                       const PopulationSample& base,
                       const SimulationConfig& cfg) {
  check_base(base, cfg);
  Scenario sc = equilibrium_scenario(vp, nce);
  sc.minor_deviation = MinorDeviation{cfg.tracked_player, spec};

  SimulationConfig run = cfg;
  run.twins = false;
  const PopulationSample dev = simulate_population(vp, riccati, sc, run);
  return paired_entry(spec, cfg.N, base.path_cost_tracked,
                      dev.path_cost_tracked);
}

GapReport nash_gap(const std::vector<GapEntry>& entries) {
  if (entries.empty()) {
    throw UsageError("nash_gap: at least one deviation entry required");
  }
  GapReport r;
  r.entries = entries;
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, -e.delta);
  r.epsilon_hat = std::max(0.0, worst);
  return r;
}

std::vector<DeviationSpec> deviation_family(DeviationTarget target, double T) {
  using K = DeviationKind;
  std::vector<DeviationSpec> f;
  auto add = [&](K kind, double theta, double lo = 0.0, double hi = 0.0) {
    f.push_back(DeviationSpec{kind, target, theta, lo, hi});
  };
  add(K::kConstantOffset, 0.0);  // null control: must reproduce the base run
  add(K::kFeedbackScale, -1.0);
  add(K::kConstantOffset, 0.5);
  add(K::kConstantOffset, -0.5);
  add(K::kTimePulse, 0.3, 0.25 * T, 0.5 * T);
  if (target == DeviationTarget::kMinor) {
    add(K::kFeedbackScale, -0.25);
    add(K::kFeedbackScale, 0.25);
    add(K::kTimePulse, -0.3, 0.5 * T, 0.75 * T);
  } else {
    // Small perturbations probe the envelope where finite-N effects and the
    // quadratic penalty are of comparable size.
    add(K::kFeedbackScale, -0.2);
    add(K::kConstantOffset, 0.02);
    add(K::kConstantOffset, -0.02);
    add(K::kTimePulse, -0.04, 0.5 * T, 0.75 * T);
  }
  return f;
}

GapStudyResult run_gap_study(const ValidatedParams& vp,
                             const RiccatiSolution& riccati,
                             const NceSolution& nce,
                             const std::vector<int>& Ns, int n_paths,
                             std::uint64_t seed, int workers, int player,
                             ResponderMode mode) {
  GapStudyResult out;
  const Scenario base_scenario = equilibrium_scenario(vp, nce);
  for (int N : Ns) {
    SimulationConfig cfg;
    cfg.N = N;
    cfg.n_paths = n_paths;
    cfg.seed = derive_seed(seed, "gap", static_cast<std::uint64_t>(N));
    cfg.workers = workers;
    cfg.tracked_player = player;
    const PopulationSample base =
        simulate_population(vp, riccati, base_scenario, cfg);

    std::vector<GapEntry> entries;
    for (const auto& spec : deviation_family(DeviationTarget::kMajor,
                                             riccati.grid.T)) {
      entries.push_back(
          deviate_major(vp, riccati, nce, spec, base, cfg, mode));
    }
    for (const auto& spec : deviation_family(DeviationTarget::kMinor,
                                             riccati.grid.T)) {
      entries.push_back(deviate_minor(vp, riccati, nce, spec, base, cfg));
    }
    out.Ns.push_back(N);
    out.seeds.push_back(cfg.seed);
    out.reports.push_back(nash_gap(entries));
  }
  return out;
}

double limiting_major_cost_perturbed(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const NceSolution& nce,
                                     const std::function<double(double)>& du,
                                     double theta) {
  const ModelParams& p = vp.get();
  const TimeGrid grid = riccati.grid;
  const double u0_coef = -p.B0 / p.R0;
  const DenseSeries p0 = nce.p0;

  auto control_at_stage = [&](std::int64_t s) {
    const double t =
        grid.T * static_cast<double>(s) / steps_at_level(grid, kLevelNce);
    return u0_coef * p0.at(kLevelNce, s) + theta * du(t);
  };
  const DenseSeries l0 = solve_perturbed_major(vp, grid, control_at_stage);
  const BvpSolution resp = solve_response_pair(vp, riccati, l0);
  const DenseSeries xbar = to_series(grid, kLevelResponse, resp.trajectory, 1);

  auto integrand = [&](int j) {
    const double t = grid.t(j);
    const double u = u0_coef * p0.node(j) + theta * du(t);
    const double dev = l0.node(j) - xbar.node(j);
    return p.Q0 * dev * dev + p.R0 * u * u;
  };
  const double l00 = l0.node(0);
  return 0.5 * simpson(grid, integrand) + 0.5 * p.H0 * l00 * l00;
}

double limiting_minor_cost_perturbed(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const NceSolution& nce,
                                     const MomentTrajectory& moments,
                                     const std::function<double(double)>& du,
                                     double theta) {
  const ModelParams& p = vp.get();
  const TimeGrid grid = riccati.grid;
  const double fb = p.B / p.R;

  // Deterministic response of the state to the open-loop direction.
  auto y_rhs = [&](std::int64_t s, double y) {
    const double t =
        grid.T * static_cast<double>(s) / steps_at_level(grid, kLevelResponse);
    return p.A * y + p.B * du(t);
  };
  const DenseSeries y = integrate_forward_scalar(
      grid, kLevelBase, 0.0, y_rhs, kDefaultStateCap,
      "moment integration overflow");

  auto integrand = [&](int j) {
    const double t = grid.t(j);
    const double mu = moments.mu.node(j);
    const double v = moments.v.node(j);
    const double xb = nce.xbar.node(j);
    const double Pj = riccati.at(j);
    const double kj = nce.k.node(j);
    const double mu_shift = mu + theta * y.node(j);
    const double eu_mean = -fb * (Pj * mu + kj);
    const double eu_sq = fb * fb * ((Pj * mu + kj) * (Pj * mu + kj) +
                                    Pj * Pj * v);
    const double d = du(t);
    const double u_sq = eu_sq + 2.0 * theta * d * eu_mean +
                        theta * theta * d * d;
    const double dev = mu_shift - xb;
    return p.Q * (dev * dev + v) + p.R * u_sq;
  };
  const double muT = moments.mu.node(grid.M) + theta * y.node(grid.M);
  const double vT = moments.v.node(grid.M);
  return 0.5 * simpson(grid, integrand) + 0.5 * p.H * (muT * muT + vT);
}

}  // namespace mmlqg

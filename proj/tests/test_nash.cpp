#include <doctest.h>

#include <cmath>

#include "mmlqg/errors.hpp"
#include "mmlqg/nash.hpp"
#include "mmlqg/rng.hpp"

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

DeviationSpec spec_of(DeviationKind kind, DeviationTarget target, double theta,
                      double lo = 0.0, double hi = 0.0) {
  return DeviationSpec{kind, target, theta, lo, hi};
}

}  // namespace

TEST_CASE("null deviations: delta exactly zero with common random numbers") {
  const Solved s = solve_all(coupled_params(), 200);
  SimulationConfig cfg;
  cfg.N = 8;
  cfg.n_paths = 40;
  cfg.seed = 4242;
  const PopulationSample base = simulate_population(
      s.vp, s.riccati, equilibrium_scenario(s.vp, s.nce), cfg);

  const GapEntry minor = deviate_minor(
      s.vp, s.riccati, s.nce,
      spec_of(DeviationKind::kConstantOffset, DeviationTarget::kMinor, 0.0),
      base, cfg);
  CHECK(minor.delta == 0.0);
  CHECK(minor.se == 0.0);

  const GapEntry major = deviate_major(
      s.vp, s.riccati, s.nce,
      spec_of(DeviationKind::kConstantOffset, DeviationTarget::kMajor, 0.0),
      base, cfg);
  CHECK(major.delta == 0.0);
  CHECK(major.se == 0.0);
}

TEST_CASE("suboptimal deviations cost more, beyond two standard errors") {
  const Solved s = solve_all(coupled_params(), 200);
  SimulationConfig cfg;
  cfg.N = 16;
  cfg.n_paths = 200;
  cfg.seed = 7001;
  const PopulationSample base = simulate_population(
      s.vp, s.riccati, equilibrium_scenario(s.vp, s.nce), cfg);

  const GapEntry kill_major = deviate_major(
      s.vp, s.riccati, s.nce,
      spec_of(DeviationKind::kFeedbackScale, DeviationTarget::kMajor, -1.0),
      base, cfg);
  CHECK(kill_major.delta > 2.0 * kill_major.se);
  CHECK(kill_major.delta > 0.0);

  const GapEntry push_minor = deviate_minor(
      s.vp, s.riccati, s.nce,
      spec_of(DeviationKind::kConstantOffset, DeviationTarget::kMinor, 0.5),
      base, cfg);
  CHECK(push_minor.delta > 2.0 * push_minor.se);

  const GapEntry pulse_minor = deviate_minor(
      s.vp, s.riccati, s.nce,
      spec_of(DeviationKind::kTimePulse, DeviationTarget::kMinor, 0.5, 0.25,
              0.5),
      base, cfg);
  CHECK(pulse_minor.delta > 2.0 * pulse_minor.se);
}

TEST_CASE("deviation runs demand a matching base sample") {
  const Solved s = solve_all(coupled_params(), 100);
  SimulationConfig cfg;
  cfg.N = 8;
  cfg.n_paths = 20;
  cfg.seed = 1;
  const PopulationSample base = simulate_population(
      s.vp, s.riccati, equilibrium_scenario(s.vp, s.nce), cfg);
  cfg.seed = 2;
  CHECK_THROWS_AS(
      deviate_minor(s.vp, s.riccati, s.nce,
                    spec_of(DeviationKind::kConstantOffset,
                            DeviationTarget::kMinor, 0.1),
                    base, cfg),
      UsageError);
}

TEST_CASE("responder modes: recomputed tracks the perturbed major") {
  const Solved s = solve_all(coupled_params(), 200);
  const DeviationSpec spec = spec_of(DeviationKind::kFeedbackScale,
                                     DeviationTarget::kMajor, -0.5);
  const MajorDeviationSystem recomputed = build_major_deviation(
      s.vp, s.riccati, s.nce, spec, ResponderMode::kRecomputed);
  const MajorDeviationSystem frozen = build_major_deviation(
      s.vp, s.riccati, s.nce, spec, ResponderMode::kFrozen);

  // boundary structure of the response pair
  CHECK(std::abs(recomputed.k_used.node(200)) < 1e-12);
  CHECK(recomputed.xbar_response.node(0) ==
        doctest::Approx(coupled_params().x_mean));
  CHECK(frozen.xbar_response.node(0) ==
        doctest::Approx(coupled_params().x_mean));

  // frozen keeps the equilibrium offset, recomputed does not
  CHECK(frozen.k_used.values == s.nce.k.values);
  double dev = 0.0;
  for (int j = 0; j <= 200; ++j) {
    dev = std::max(dev,
                   std::abs(recomputed.k_used.node(j) - s.nce.k.node(j)));
  }
  CHECK(dev > 1e-4);

  // both responses feel the perturbed major
  CHECK(recomputed.l0.node(200) == doctest::Approx(coupled_params().xi));
  CHECK(frozen.l0.node(200) == doctest::Approx(coupled_params().xi));
}

TEST_CASE("nash_gap aggregates the worst negative delta") {
  GapEntry a, b, c;
  a.delta = 0.3;
  b.delta = -0.02;
  c.delta = 1.1;
  const GapReport r = nash_gap({a, b, c});
  CHECK(r.epsilon_hat == doctest::Approx(0.02));

  const GapReport all_pos = nash_gap({a, c});
  CHECK(all_pos.epsilon_hat == 0.0);
  CHECK_THROWS_AS(nash_gap({}), UsageError);
}

TEST_CASE("the documented family has a null and >= 6 live deviations") {
  for (auto target : {DeviationTarget::kMajor, DeviationTarget::kMinor}) {
    const auto family = deviation_family(target, 1.0);
    int nulls = 0, live = 0;
    for (const auto& d : family) {
      (d.is_null() ? nulls : live)++;
      CHECK(d.target == target);
      if (d.kind == DeviationKind::kTimePulse) {
        CHECK(d.window_lo >= 0.0);
        CHECK(d.window_hi <= 1.0);
        CHECK(d.window_lo < d.window_hi);
      }
    }
    CHECK(nulls == 1);
    CHECK(live >= 6);
  }
}

TEST_CASE("limiting perturbations are nonnegative, even and quadratic") {
  const Solved s = solve_all(coupled_params(), 400);
  const auto constant_dir = [](double) { return 1.0; };
  const auto sine_dir = [](double t) { return std::sin(3.14159265358979 * t); };

  for (const auto& du : {std::function<double(double)>(constant_dir),
                         std::function<double(double)>(sine_dir)}) {
    const double base_major =
        limiting_major_cost_perturbed(s.vp, s.riccati, s.nce, du, 0.0);
    const double base_minor = limiting_minor_cost_perturbed(
        s.vp, s.riccati, s.nce, s.moments, du, 0.0);
    for (double theta : {0.1, 0.2}) {
      const double up_major = limiting_major_cost_perturbed(
          s.vp, s.riccati, s.nce, du, theta);
      const double dn_major = limiting_major_cost_perturbed(
          s.vp, s.riccati, s.nce, du, -theta);
      CHECK(up_major - base_major >= -1e-10);
      CHECK(dn_major - base_major >= -1e-10);
      CHECK(std::abs(up_major - dn_major) < 1e-8);

      const double up_minor = limiting_minor_cost_perturbed(
          s.vp, s.riccati, s.nce, s.moments, du, theta);
      const double dn_minor = limiting_minor_cost_perturbed(
          s.vp, s.riccati, s.nce, s.moments, du, -theta);
      CHECK(up_minor - base_minor >= -1e-10);
      CHECK(dn_minor - base_minor >= -1e-10);
      CHECK(std::abs(up_minor - dn_minor) < 1e-8);
    }
    // quadratic in theta: Delta(0.2) = 4 Delta(0.1) once the odd part is gone
    const double d1 = limiting_major_cost_perturbed(s.vp, s.riccati, s.nce,
                                                    du, 0.1) -
                      base_major;
    const double d2 = limiting_major_cost_perturbed(s.vp, s.riccati, s.nce,
                                                    du, 0.2) -
                      base_major;
    CHECK(d2 == doctest::Approx(4.0 * d1).epsilon(1e-6));
  }
}

TEST_CASE("gap study: per-N seeds derive from the master seed") {
  const Solved s = solve_all(coupled_params(), 100);
  const GapStudyResult r =
      run_gap_study(s.vp, s.riccati, s.nce, {4, 8}, 20, 555, 1, 0);
  REQUIRE(r.Ns.size() == 2);
  CHECK(r.seeds[0] == derive_seed(555, "gap", 4));
  CHECK(r.seeds[1] == derive_seed(555, "gap", 8));
  for (const auto& report : r.reports) {
    bool found_null = false;
    for (const auto& e : report.entries) {
      if (e.spec.is_null()) {
        found_null = true;
        CHECK(e.delta == 0.0);
      }
    }
    CHECK(found_null);
    CHECK(report.epsilon_hat >= 0.0);
  }
}

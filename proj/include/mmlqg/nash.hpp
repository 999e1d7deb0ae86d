#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mmlqg/moments.hpp"
#include "mmlqg/population.hpp"

namespace mmlqg {

// Whether responders to a perturbed major react through the response pair
// (k, xbar) recomputed from the perturbed major trajectory, or keep the
// equilibrium k. Both variants exist because the source construction is
// ambiguous; recomputed is the default.
enum class ResponderMode { kRecomputed, kFrozen };

struct GapEntry {
  DeviationSpec spec;
  int N = 0;
  double j_base = 0.0;
  double j_dev = 0.0;
  double delta = 0.0;  // j_dev - j_base under common random numbers
  double se = 0.0;     // SE of the path-wise paired difference
};

struct GapReport {
  std::vector<GapEntry> entries;
  double epsilon_hat = 0.0;  // max(0, max over entries of -delta)
};

// Perturbed-major construction: backward ODE for the deviated major state
//   l0' = A0 l0 + B0 u0_dev,  l0(T) = xi,
// then the 2-dimensional response BVP for (k_l0, xbar_l0):
//   k'    = (-A + (B^2/R) P) k + (Q - D P) xbar - alpha P l0,  k(T) = 0,
//   xbar' = (A + D - (B^2/R) P) xbar - (B^2/R) k + alpha l0,   xbar(0) = x.
// In frozen mode k is the equilibrium offset and xbar solves the forward ODE
// forced by it.
struct MajorDeviationSystem {
  DenseSeries l0;      // kLevelMajorDev
  DenseSeries k_used;  // kLevelResponse (or equilibrium k)
  DenseSeries xbar_response;
  std::function<double(double, int)> control;  // (t, node) -> u0_dev(t_j)
};

MajorDeviationSystem build_major_deviation(const ValidatedParams& vp,
                                           const RiccatiSolution& riccati,
                                           const NceSolution& nce,
                                           const DeviationSpec& spec,
                                           ResponderMode mode);

// Simulates the population response to the deviated major and evaluates the
// major cost against the base run on identical noise streams. `base` must
// come from the equilibrium scenario with the same (N, n_paths, seed).
GapEntry deviate_major(const ValidatedParams& vp, const RiccatiSolution& riccati,
                       const NceSolution& nce, const DeviationSpec& spec,
                       const PopulationSample& base, const SimulationConfig& cfg,
                       ResponderMode mode = ResponderMode::kRecomputed);

// Single deviating minor against N-1 equilibrium responders, coupled through
// the running state average; evaluates the deviating player's cost.
GapEntry deviate_minor(const ValidatedParams& vp, const RiccatiSolution& riccati,
                       const NceSolution& nce, const DeviationSpec& spec,
                       const PopulationSample& base, const SimulationConfig& cfg);

GapReport nash_gap(const std::vector<GapEntry>& entries);

// The documented deviation family (>= 6 non-null deviations per target plus
// the null control, which must reproduce the base run exactly).
std::vector<DeviationSpec> deviation_family(DeviationTarget target, double T);

// Full deviation study: for each N, one base run plus the documented family
// for both targets on common random numbers (per-N seed from
// derive_seed(seed, "gap", N); deviations reuse the base seed so paired
// differences cancel the shared noise).
struct GapStudyResult {
  std::vector<int> Ns;
  std::vector<std::uint64_t> seeds;
  std::vector<GapReport> reports;  // one per N, both targets pooled
};

GapStudyResult run_gap_study(const ValidatedParams& vp,
                             const RiccatiSolution& riccati,
                             const NceSolution& nce,
                             const std::vector<int>& Ns, int n_paths,
                             std::uint64_t seed, int workers, int player,
                             ResponderMode mode = ResponderMode::kRecomputed);

// --- limiting stationarity checks (no Monte Carlo) ---

// J_bar_0(u0_bar + theta du) through the perturbed backward ODE, the response
// BVP and Simpson quadrature. theta = 0 gives the baseline of the check.
double limiting_major_cost_perturbed(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const NceSolution& nce,
                                     const std::function<double(double)>& du,
                                     double theta);

// J_bar_i(u_i_bar + theta du) for a representative minor via the exact
// Gaussian second moments: an open-loop shift moves the mean by theta*y with
// y' = A y + B du, y(0) = 0, and leaves the variance unchanged.
double limiting_minor_cost_perturbed(const ValidatedParams& vp,
                                     const RiccatiSolution& riccati,
                                     const NceSolution& nce,
                                     const MomentTrajectory& moments,
                                     const std::function<double(double)>& du,
                                     double theta);

}  // namespace mmlqg

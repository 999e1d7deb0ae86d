#pragma once

#include <string>
#include <vector>

namespace mmlqg {

// All scalar problem data: major dynamics (A0, B0, C0), minor dynamics
// (A, B, D, alpha, sigma), cost weights, horizon T, the deterministic
// terminal value xi of the major state, and the common initial law
// (mean, variance) of the minor states.
struct ModelParams {
  // major player dynamics
  double A0 = 0.0;
  double B0 = 1.0;
  double C0 = 0.0;
  // minor player dynamics
  double A = 0.0;
  double B = 1.0;
  double D = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  // major cost weights
  double Q0 = 0.0;
  double R0 = 1.0;
  double H0 = 0.0;
  // minor cost weights
  double Q = 0.0;
  double R = 1.0;
  double H = 0.0;
  // horizon, terminal value, initial law of minors
  double T = 1.0;
  double xi = 0.0;
  double x_mean = 0.0;
  double x_var = 0.0;

  bool operator==(const ModelParams&) const = default;
};

class ValidatedParams;

// Outcome of validate_params: either a usable ValidatedParams or the full
// list of violated conditions, each named ("R must be > 0", ...).
struct ParamValidation {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ParamValidation validate_params(const ModelParams& p);

// Parameters that passed every standing condition. Constructible only via
// require_valid, so downstream solvers can assume the sign conditions hold.
class ValidatedParams {
 public:
  const ModelParams& get() const { return p_; }
  const ModelParams* operator->() const { return &p_; }

  // B^2/R, the control-energy coefficient in the Riccati and NCE drifts.
  double minor_gain() const { return p_.B * p_.B / p_.R; }
  // B0^2/R0, the major counterpart.
  double major_gain() const { return p_.B0 * p_.B0 / p_.R0; }

 private:
  friend ValidatedParams require_valid(const ModelParams& p);
  explicit ValidatedParams(const ModelParams& p) : p_(p) {}
  ModelParams p_;
};

// Throws UsageError listing every violated condition.
ValidatedParams require_valid(const ModelParams& p);

}  // namespace mmlqg

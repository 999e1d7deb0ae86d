#include "mmlqg/params.hpp"

#include <cmath>

#include "mmlqg/errors.hpp"

namespace mmlqg {

namespace {

void check(std::vector<std::string>& out, bool ok, const char* message) {
  if (!ok) out.emplace_back(message);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ParamValidation validate_params(const ModelParams& p) {
  ParamValidation r;
  auto& v = r.violations;

  const double all[] = {p.A0, p.B0, p.C0, p.A,  p.B,      p.D,
                        p.alpha, p.sigma, p.Q0, p.R0, p.H0, p.Q,
                        p.R,  p.H,  p.T,  p.xi, p.x_mean, p.x_var};
  for (double x : all) {
    if (!finite(x)) {
      v.emplace_back("all coefficients must be finite");
      break;
    }
  }

  check(v, p.Q0 >= 0.0, "Q0 must be >= 0");
  check(v, p.R0 > 0.0, "R0 must be > 0");
  check(v, p.H0 >= 0.0, "H0 must be >= 0");
  check(v, p.Q >= 0.0, "Q must be >= 0");
  check(v, p.R > 0.0, "R must be > 0");
  check(v, p.H >= 0.0, "H must be >= 0");
  check(v, p.B0 != 0.0, "B0 must be nonzero");
  check(v, p.T > 0.0, "T must be > 0");
  check(v, p.x_var >= 0.0, "x_var must be >= 0");
  return r;
}

ValidatedParams require_valid(const ModelParams& p) {
  ParamValidation r = validate_params(p);
  if (!r.ok()) {
    std::string what = "invalid parameters:";
    for (const auto& m : r.violations) what += " [" + m + "]";
    throw UsageError(what);
  }
  return ValidatedParams(p);
}

}  // namespace mmlqg

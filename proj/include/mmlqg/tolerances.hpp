#pragma once

namespace mmlqg {

// Solver tolerances and guards. All values are fixed here; nothing is
// calibrated at run time.
inline constexpr double kRiccatiResidualTol = 1e-6;
inline constexpr double kNceResidualTol = 1e-6;
inline constexpr double kBoundaryDefectTol = 1e-10;
inline constexpr double kConsistencyTol = 1e-6;
inline constexpr double kMeanFieldIdentityTol = 1e-10;

// Boundary-matching matrices with a condition number above this are treated
// as numerically singular; unique solvability should hold whenever B0 != 0,
// so hitting this limit indicates a discretization pathology.
inline constexpr double kConditionLimit = 1e10;

// Default |state| cap for the Euler-Maruyama simulator and ODE integrators.
inline constexpr double kDefaultStateCap = 1e6;

}  // namespace mmlqg

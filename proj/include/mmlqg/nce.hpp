#pragma once

#include <array>
#include <utility>
#include <vector>

#include "mmlqg/bvp.hpp"
#include "mmlqg/dense.hpp"
#include "mmlqg/riccati.hpp"

namespace mmlqg {

// Component order of the consistency (NCE) system state vector.
enum NceComponent : int {
  kX0Hat = 0,  // major state, terminal value xi
  kXbar = 1,   // mean field, initial value x_mean
  kK = 2,      // feedback offset process, terminal value 0
  kP0 = 3,     // major adjoint, p0(0) = -H0 x0_hat(0)
  kP = 4,      // mean-field adjoint, terminal value 0
  kQadj = 5,   // offset adjoint, initial value 0
};
inline constexpr int kNceDim = 6;

// Deterministic solution of the 6-dimensional mixed-boundary consistency
// system. With deterministic terminal data the martingale integrands
// (z0, beta0, beta_bar) vanish identically; they are kept as explicit
// zero-valued fields so the data model extends to a stochastic mode.
struct NceSolution {
  TimeGrid grid;
  DenseSeries x0_hat, xbar, k, p0, p, q;  // stored at kLevelNce
  std::vector<double> z0, beta0, beta_bar;  // M+1 zeros
  double condition_number = 0.0;

  const DenseSeries& component(int c) const {
    const DenseSeries* s[kNceDim] = {&x0_hat, &xbar, &k, &p0, &p, &q};
    return *s[c];
  }

  // Decentralized control traces.
  double u0_node(int j, const ValidatedParams& vp) const {
    return -vp->B0 / vp->R0 * p0.node(j);
  }
  double u0_at(int level, std::int64_t idx, const ValidatedParams& vp) const {
    return -vp->B0 / vp->R0 * p0.at(level, idx);
  }
  double feedback_offset_node(int j, const ValidatedParams& vp) const {
    return -vp->B / vp->R * k.node(j);
  }
};

// Drift matrix of the consistency system with the minor Hamiltonian
// decoupled through P(t). Rows follow the NceComponent order; there is no
// forcing term (the data xi, x_mean enter through the boundary operator
// only). Throws UsageError on a grid mismatch with the Riccati solution.
LinearBvpSystem assemble_nce(const ValidatedParams& vp,
                             const RiccatiSolution& riccati);

// Shooting solve of the assembled system (optionally with a non-identity
// fundamental basis, used by the uniqueness probe).
NceSolution solve_nce(const ValidatedParams& vp, const RiccatiSolution& riccati,
                      const Eigen::MatrixXd& basis = Eigen::MatrixXd());

struct NceResidualReport {
  std::array<double, kNceDim> equation_max{};
  std::array<double, kNceDim> boundary_defect{};
  double worst_equation() const;
  double worst_boundary() const;
};

NceResidualReport nce_residual(const NceSolution& sol,
                               const LinearBvpSystem& system);

// A-posteriori consistency verification replacing fixed-point iteration:
// (i) re-integrates the mean-field ODE forward from x_mean using the solved
// x0_hat and k, (ii) re-integrates the offset equation backward from 0 using
// the solved xbar and x0_hat. Returns (max |xbar dev|, max |k dev|).
std::pair<double, double> consistency_check(const NceSolution& sol,
                                            const ValidatedParams& vp,
                                            const RiccatiSolution& riccati);

// Auxiliary drift coefficients identified when matching the pre-decoupling
// Hamilton system with the decoupled one:
//   A_bar = A + D - (B^2/R) P,  B_bar = alpha,       C_bar = -(B^2/R),
//   A_tld = -A + (B^2/R) P,     B_tld = Q - D P,     C_tld = -alpha P.
struct AuxiliaryCoefficients {
  double a_bar, b_bar, c_bar, a_tilde, b_tilde, c_tilde;
};
AuxiliaryCoefficients auxiliary_coefficients(const ValidatedParams& vp,
                                             double P);

}  // namespace mmlqg

#pragma once

#include <string>

#include "qbo/instance.hpp"
#include "qbo/solve.hpp"

namespace qbo {

// Independent recheck of a solver claim against the instance data only.
//  Optimal:     primal feasibility, objective match, dual feasibility,
//               stationarity and weak-duality gap.
//  Infeasible:  Farkas certificate with the dual matrices clipped to PSD,
//               adjoint residual and margin recomputed from scratch;
//               requires margin >= 1e-6.
//  Unbounded:   improving-ray conditions on res.x.
//  Other statuses carry no claim and never pass.
struct VerifyReport {
  bool pass = false;
  double psd_min_eig = 0.0;     // min eigenvalue over primal blocks
  double eq_residual = 0.0;     // max |E x - d|
  double obj_mismatch = 0.0;    // |recomputed objective - reported value|
  double dual_min_eig = 0.0;    // min eigenvalue over dual blocks
  double stationarity = 0.0;    // max_i |c_i + sum<A_ji,Y_j> - (E'lambda)_i|
  double duality_gap = 0.0;     // dual objective - primal value
  double farkas_margin = 0.0;
  double farkas_adjoint = 0.0;
  // margin / adjoint of the normalized clipped certificate: every x with
  // ||x||_1 below this radius is refuted even with the adjoint leak, since
  // sum_j <S_j(x), Y_j> <= -margin + adjoint * ||x||_1 must be nonnegative
  // for feasible x. Infinite when the adjoint vanishes.
  double farkas_radius = 0.0;
  std::string detail;
  std::string to_string() const;
};

inline constexpr double kFarkasMarginFloor = 1e-6;

// Adjoint tolerance for certificate verification. First-order solves leave
// a residual around 1e-6 on a normalized certificate; 1e-5 accepts those
// while the reported farkas_radius (margin/adjoint, typically >= 1e5) shows
// how far the refutation actually reaches.
inline constexpr double kCertAdjointTol = 1e-5;

VerifyReport verify(const SDPInstance& inst, const SolveResult& res, double tol);

}  // namespace qbo

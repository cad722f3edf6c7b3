#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbo/instance.hpp"

namespace qbo {

enum class SolveStatus { Optimal, Infeasible, Unbounded, Inaccurate, TimeOut };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double feas_tol = 1e-8;   // relative primal/dual residual target
  double gap_tol = 1e-8;    // relative duality gap target
  std::int64_t max_iters = 400000;
  double time_limit_s = 0.0;  // 0 disables the wall clock cap
  bool verbose = false;
};

struct Residuals {
  double primal = 0.0;  // ||Ex - d||, min-eig violation folded in
  double dual = 0.0;    // stationarity residual of the multipliers
  double gap = 0.0;     // relative primal/dual objective gap
};

// Dual improving ray proving primal infeasibility: Y_j >= 0, lambda free,
// sum_j <A_ji, Y_j> = (E'lambda)_i for all i, and
// margin = -(sum_j <B_j, Y_j> + d'lambda) > 0.
struct FarkasCertificate {
  std::vector<Eigen::MatrixXd> Y;
  Eigen::VectorXd eq_dual;
  double margin = 0.0;
  double adjoint_residual = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Inaccurate;
  double value = 0.0;
  Eigen::VectorXd x;
  // Multipliers in the Lagrangian c'x + sum_j <Y_j, S_j(x)> + lambda'(d - Ex):
  // at an optimum Y_j >= 0 and c_i + sum_j <A_ji, Y_j> - (E'lambda)_i = 0.
  std::vector<Eigen::MatrixXd> block_duals;
  Eigen::VectorXd eq_duals;
  Residuals residuals;
  std::optional<FarkasCertificate> certificate;
  // Unbounded: x holds the improving ray instead of a point.
  std::int64_t iters = 0;
  double wall_s = 0.0;
  std::string message;
};

SolveResult solve(const SDPInstance& inst, const SolveOptions& opts = {});

// Feasibility phase: minimize t such that S_j(x) + t*I >= 0 with the original
// equalities. tstar <= tol certifies a feasible point; tstar > 0 turns the
// duals into a Farkas certificate for the original instance (margin = tstar).
struct Phase1Result {
  double tstar = 0.0;
  SolveResult res;  // result on the augmented instance; x excludes t
};
Phase1Result solve_phase1(const SDPInstance& inst, const SolveOptions& opts = {});

}  // namespace qbo

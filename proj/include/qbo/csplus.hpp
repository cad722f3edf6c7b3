#pragma once

#include <Eigen/Core>

#include "qbo/builder.hpp"
#include "qbo/solve.hpp"
#include "qbo/verify.hpp"

namespace qbo {

enum class MembershipStatus { FeasibleAtLevel, CertifiedOutside, Inconclusive };
const char* to_string(MembershipStatus s);

struct MembershipResult {
  MembershipStatus status = MembershipStatus::Inconclusive;
  int level = 0;
  double phase1 = 0.0;             // optimal slack of the feasibility program
  SolveResult solve;               // carries the Farkas certificate if outside
  VerifyReport report;             // certificate audit (CertifiedOutside only)
};

// Tests K against the level-n relaxation of the Gram-of-PSD-matrices cone.
// The hierarchy only refutes: FeasibleAtLevel does NOT establish membership.
// CertifiedOutside is returned only when the dual certificate independently
// verifies with margin >= 1e-6.
MembershipResult csplus_membership(const Eigen::MatrixXd& K, int level,
                                   const SolveOptions& opts = {});

// Upper bound on max <A, Lambda> over the cone section cut out by the moment
// equalities; non-increasing in level.
SolveResult csplus_optimize(const Eigen::MatrixXd& A,
                            const std::vector<MomentEquality>& eqs, int level,
                            const SolveOptions& opts = {});

// The 5x5 integer matrix whose exclusion from the cone's closure is certified
// at level 3.
Eigen::MatrixXd outside_cone_example();

}  // namespace qbo

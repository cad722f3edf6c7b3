#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "qbo/words.hpp"

namespace qbo {

enum class Sense { NonNeg, Zero };
enum class Family { ZOnly, YOnly, Mixed };

// One affine functional f(z,y) = coeffs[0] + sum_a coeffs[a] z_a
// + sum_b coeffs[N+b] y_b, constrained >= 0 (NonNeg) or = 0 (Zero).
struct AffineConstraint {
  std::vector<double> coeffs;  // size 1 + N + M; index 0 multiplies the constant
  Sense sense = Sense::NonNeg;
  Family family = Family::ZOnly;
};

// maximize z'Ay + a'z + b'y + c over the polytopes cut out by G (z side) and
// K (y side). The constant constraint "1" is implicit, never stored.
struct BilinearProblem {
  int N = 0;
  int M = 0;
  Eigen::MatrixXd A;  // N x M
  Eigen::VectorXd a;  // N (zero-filled when absent)
  Eigen::VectorXd b;  // M
  double c = 0.0;
  std::vector<AffineConstraint> G;  // ZOnly constraints
  std::vector<AffineConstraint> K;  // YOnly constraints
  double bound_C = 1.0;
  // Materialize upper boxes implied by simplex equalities (x <= s from
  // sum x = s, x >= 0) into F before building localizing blocks.
  bool materialize_boxes = true;

  Alphabet alphabet() const { return Alphabet{N, M}; }
};

struct ScalarPoint {
  Eigen::VectorXd z;
  Eigen::VectorXd y;
};

struct ValidationIssue {
  enum class Kind { UnboundedVariable, FamilyViolation, DimensionMismatch };
  Kind kind;
  int index;  // symbol index for UnboundedVariable, constraint index otherwise
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;
  std::string to_string() const;
};

Family classify_family(const std::vector<double>& coeffs, int N, int M);

// Checks family separation and that every variable carries syntactic box or
// box+simplex bounds within bound_C. Patterns only, no LP.
ValidationReport validate(const BilinearProblem& p);

double evaluate(const BilinearProblem& p, const ScalarPoint& pt);
bool is_feasible(const BilinearProblem& p, const ScalarPoint& pt, double tol);

// Value of one affine constraint at a point.
double constraint_value(const AffineConstraint& f, int N, int M, const ScalarPoint& pt);

// G and K with implied upper boxes appended (when the problem's flag is set).
// This is the F used by the hierarchy builders.
std::pair<std::vector<AffineConstraint>, std::vector<AffineConstraint>>
materialized_constraints(const BilinearProblem& p);

// The constant functional "1" (coeffs = e_0), NonNeg.
AffineConstraint constant_one(int N, int M);

}  // namespace qbo

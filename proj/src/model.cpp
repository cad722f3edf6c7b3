#include "qbo/model.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "qbo/error.hpp"

namespace qbo {

std::string ValidationReport::to_string() const {
  if (ok) return "ok";
  std::string s;
  for (const auto& i : issues) {
    if (!s.empty()) s += "; ";
    switch (i.kind) {
      case ValidationIssue::Kind::UnboundedVariable: s += "UnboundedVariable "; break;
      case ValidationIssue::Kind::FamilyViolation: s += "FamilyViolation "; break;
      case ValidationIssue::Kind::DimensionMismatch: s += "DimensionMismatch "; break;
    }
    s += i.detail;
  }
  return s;
}

Family classify_family(const std::vector<double>& coeffs, int N, int M) {
  bool has_z = false, has_y = false;
  for (int i = 1; i <= N + M && i < static_cast<int>(coeffs.size()); ++i) {
    if (coeffs[i] == 0.0) continue;
    (i <= N ? has_z : has_y) = true;
  }
  if (has_z && has_y) return Family::Mixed;
  if (has_y) return Family::YOnly;
  return Family::ZOnly;  // constant-only rows default to the z side
}

namespace {

struct Bounds {
  std::vector<std::optional<double>> lo, hi;
  explicit Bounds(int n) : lo(n), hi(n) {}
  void tighten_lo(int i, double v) {
    if (!lo[i] || *lo[i] < v) lo[i] = v;
  }
  void tighten_hi(int i, double v) {
    if (!hi[i] || *hi[i] > v) hi[i] = v;
  }
};

// Variable indices (0-based within the side) with nonzero coefficients.
std::vector<int> support(const AffineConstraint& f, int offset, int count) {
  std::vector<int> s;
  for (int i = 0; i < count; ++i)
    if (f.coeffs[offset + i] != 0.0) s.push_back(i);
  return s;
}

// Scans one side's constraints for direct single-variable boxes only.
Bounds box_bounds(const std::vector<AffineConstraint>& cons, int offset, int count) {
  Bounds b(count);
  for (const auto& f : cons) {
    auto sup = support(f, offset, count);
    if (sup.size() != 1) continue;
    const int i = sup[0];
    const double t = f.coeffs[offset + i];
    const double c0 = f.coeffs[0];
    if (f.sense == Sense::Zero) {
      b.tighten_lo(i, -c0 / t);
      b.tighten_hi(i, -c0 / t);
    } else if (t > 0) {
      b.tighten_lo(i, -c0 / t);
    } else {
      b.tighten_hi(i, c0 / (-t));
    }
  }
  return b;
}

// Adds the second boundedness pattern on top of the boxes: x >= 0 plus a
// nonnegative simplex-type equality implying an upper bound.
Bounds side_bounds(const std::vector<AffineConstraint>& cons, int offset, int count) {
  Bounds b = box_bounds(cons, offset, count);
  for (const auto& f : cons) {
    if (f.sense != Sense::Zero) continue;
    auto sup = support(f, offset, count);
    if (sup.size() < 2) continue;
    bool nonneg_coeffs = true;
    for (int i : sup)
      if (f.coeffs[offset + i] < 0) nonneg_coeffs = false;
    if (!nonneg_coeffs) continue;
    const double s = -f.coeffs[0];  // sum c_i x_i = s
    if (s < 0) continue;
    bool all_lower_zero = true;
    for (int i : sup)
      if (!b.lo[i] || *b.lo[i] < -1e-12) all_lower_zero = false;
    if (!all_lower_zero) continue;
    for (int i : sup) b.tighten_hi(i, s / f.coeffs[offset + i]);
  }
  return b;
}

}  // namespace

ValidationReport validate(const BilinearProblem& p) {
  ValidationReport rep;
  auto issue = [&](ValidationIssue::Kind k, int idx, std::string d) {
    rep.ok = false;
    rep.issues.push_back({k, idx, std::move(d)});
  };

  if (p.N < 0 || p.M < 0 || p.N + p.M < 1)
    issue(ValidationIssue::Kind::DimensionMismatch, -1, "need N+M >= 1");
  if (p.A.rows() != p.N || p.A.cols() != p.M)
    issue(ValidationIssue::Kind::DimensionMismatch, -1, "objective matrix A is not N x M");
  if (p.a.size() != p.N)
    issue(ValidationIssue::Kind::DimensionMismatch, -1, "linear term a is not length N");
  if (p.b.size() != p.M)
    issue(ValidationIssue::Kind::DimensionMismatch, -1, "linear term b is not length M");
  const std::size_t want = static_cast<std::size_t>(1 + p.N + p.M);
  for (std::size_t i = 0; i < p.G.size(); ++i)
    if (p.G[i].coeffs.size() != want)
      issue(ValidationIssue::Kind::DimensionMismatch, static_cast<int>(i),
            "G[" + std::to_string(i) + "] has wrong coefficient count");
  for (std::size_t i = 0; i < p.K.size(); ++i)
    if (p.K[i].coeffs.size() != want)
      issue(ValidationIssue::Kind::DimensionMismatch, static_cast<int>(i),
            "K[" + std::to_string(i) + "] has wrong coefficient count");
  if (!rep.ok) return rep;

  for (std::size_t i = 0; i < p.G.size(); ++i)
    if (classify_family(p.G[i].coeffs, p.N, p.M) != Family::ZOnly)
      issue(ValidationIssue::Kind::FamilyViolation, static_cast<int>(i),
            "G[" + std::to_string(i) + "] touches y variables");
  for (std::size_t i = 0; i < p.K.size(); ++i)
    if (classify_family(p.K[i].coeffs, p.N, p.M) != Family::YOnly &&
        classify_family(p.K[i].coeffs, p.N, p.M) != Family::ZOnly)
      issue(ValidationIssue::Kind::FamilyViolation, static_cast<int>(i),
            "K[" + std::to_string(i) + "] touches z variables");
  // A constant-only K row classifies as ZOnly above; only actual z
  // coefficients violate.
  for (std::size_t i = 0; i < p.K.size(); ++i) {
    for (int a = 1; a <= p.N; ++a)
      if (p.K[i].coeffs[a] != 0.0) {
        issue(ValidationIssue::Kind::FamilyViolation, static_cast<int>(i),
              "K[" + std::to_string(i) + "] touches z variables");
        break;
      }
  }
  if (!rep.ok) return rep;

  const double C = p.bound_C + 1e-9;
  Bounds bz = side_bounds(p.G, 1, p.N);
  Bounds by = side_bounds(p.K, 1 + p.N, p.M);
  for (int i = 0; i < p.N; ++i)
    if (!bz.lo[i] || !bz.hi[i] || *bz.lo[i] < -C || *bz.hi[i] > C)
      issue(ValidationIssue::Kind::UnboundedVariable, i + 1,
            "z" + std::to_string(i + 1) + " lacks box bounds within bound_C");
  for (int i = 0; i < p.M; ++i)
    if (!by.lo[i] || !by.hi[i] || *by.lo[i] < -C || *by.hi[i] > C)
      issue(ValidationIssue::Kind::UnboundedVariable, p.N + i + 1,
            "y" + std::to_string(i + 1) + " lacks box bounds within bound_C");
  return rep;
}

double constraint_value(const AffineConstraint& f, int N, int M, const ScalarPoint& pt) {
  double v = f.coeffs[0];
  for (int i = 0; i < N; ++i) v += f.coeffs[1 + i] * pt.z[i];
  for (int i = 0; i < M; ++i) v += f.coeffs[1 + N + i] * pt.y[i];
  return v;
}

double evaluate(const BilinearProblem& p, const ScalarPoint& pt) {
  if (pt.z.size() != p.N || pt.y.size() != p.M)
    throw Error(Error::Code::DimensionMismatch, "point dimensions do not match problem");
  double v = p.c;
  if (p.N && p.M) v += pt.z.dot(p.A * pt.y);
  if (p.N) v += p.a.dot(pt.z);
  if (p.M) v += p.b.dot(pt.y);
  return v;
}

bool is_feasible(const BilinearProblem& p, const ScalarPoint& pt, double tol) {
  if (pt.z.size() != p.N || pt.y.size() != p.M)
    throw Error(Error::Code::DimensionMismatch, "point dimensions do not match problem");
  for (const auto& f : p.G) {
    const double v = constraint_value(f, p.N, p.M, pt);
    if (f.sense == Sense::NonNeg ? v < -tol : std::abs(v) > tol) return false;
  }
  for (const auto& f : p.K) {
    const double v = constraint_value(f, p.N, p.M, pt);
    if (f.sense == Sense::NonNeg ? v < -tol : std::abs(v) > tol) return false;
  }
  return true;
}

namespace {

// Appends upper boxes "s/c_i - x_i >= 0" implied by each nonnegative simplex
// equality whose support carries explicit x >= 0 rows. Skips rows already
// present verbatim.
void materialize_side(std::vector<AffineConstraint>& cons, int offset, int count, int coeff_len,
                      Family fam) {
  // Dedup must consult explicit boxes only; side_bounds would already carry
  // the implied caps this function is about to add.
  Bounds b = box_bounds(cons, offset, count);
  std::vector<AffineConstraint> extra;
  for (const auto& f : cons) {
    if (f.sense != Sense::Zero) continue;
    std::vector<int> sup;
    for (int i = 0; i < count; ++i)
      if (f.coeffs[offset + i] != 0.0) sup.push_back(i);
    if (sup.size() < 2) continue;
    bool ok = true;
    for (int i : sup)
      if (f.coeffs[offset + i] < 0 || !b.lo[i] || *b.lo[i] < -1e-12) ok = false;
    const double s = -f.coeffs[0];
    if (!ok || s < 0) continue;
    for (int i : sup) {
      const double cap = s / f.coeffs[offset + i];
      if (b.hi[i] && *b.hi[i] <= cap + 1e-15) continue;  // a tighter box already exists
      AffineConstraint up;
      up.coeffs.assign(coeff_len, 0.0);
      up.coeffs[0] = cap;
      up.coeffs[offset + i] = -1.0;
      up.sense = Sense::NonNeg;
      up.family = fam;
      extra.push_back(std::move(up));
    }
  }
  for (auto& e : extra) {
    bool dup = false;
    for (const auto& f : cons)
      if (f.sense == e.sense && f.coeffs == e.coeffs) dup = true;
    if (!dup) cons.push_back(std::move(e));
  }
}

}  // namespace

std::pair<std::vector<AffineConstraint>, std::vector<AffineConstraint>>
materialized_constraints(const BilinearProblem& p) {
  auto G = p.G;
  auto K = p.K;
  if (p.materialize_boxes) {
    const int len = 1 + p.N + p.M;
    materialize_side(G, 1, p.N, len, Family::ZOnly);
    materialize_side(K, 1 + p.N, p.M, len, Family::YOnly);
  }
  return {std::move(G), std::move(K)};
}

AffineConstraint constant_one(int N, int M) {
  AffineConstraint one;
  one.coeffs.assign(1 + N + M, 0.0);
  one.coeffs[0] = 1.0;
  one.sense = Sense::NonNeg;
  one.family = Family::ZOnly;
  return one;
}

}  // namespace qbo

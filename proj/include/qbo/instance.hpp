#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace qbo {

struct LinTerm {
  std::uint32_t var;
  double coef;
};

// One PSD block S(x) = C + sum_i x_i A_i, stored sparsely on the upper
// triangle (r <= c); the symmetric extension is implied.
struct PSDBlock {
  int size = 0;
  struct MapEntry {
    int r, c;
    std::uint32_t var;
    double coef;
  };
  struct ConstEntry {
    int r, c;
    double value;
  };
  std::vector<MapEntry> lin;
  std::vector<ConstEntry> cst;
  std::string label;
};

struct EqRow {
  std::vector<LinTerm> terms;
  double rhs = 0.0;
};

// Solver-facing normal form shared by every hierarchy:
//   maximize objective'x (+ obj_const)  s.t.  each block PSD, E x = d.
// Scalar inequality rows are 1x1 blocks.
struct SDPInstance {
  std::uint32_t var_count = 0;
  std::vector<LinTerm> objective;
  double obj_const = 0.0;
  std::vector<PSDBlock> blocks;
  std::vector<EqRow> equalities;

  struct Metadata {
    std::string kind;
    int level = 0;
    std::map<std::string, std::string> info;
  } meta;

  // Throws on out-of-range variable references or empty blocks.
  void check() const;
  // Human-readable block inventory ("156x156 moment, 15x 36x36 insertion, ...").
  std::string inventory() const;
  std::size_t scalar_block_count() const;
};

// Dense value of one block's affine map at x.
Eigen::MatrixXd block_value(const PSDBlock& b, const Eigen::VectorXd& x);

// max_i |E_i x - d_i|.
double equality_residual(const SDPInstance& inst, const Eigen::VectorXd& x);

double objective_value(const SDPInstance& inst, const Eigen::VectorXd& x);

// Accumulates equality rows with exact dedup: terms merged by variable,
// zero coefficients dropped, sign normalized. Rows that cancel to 0 = 0 are
// skipped; rows that cancel to 0 = rhs (rhs != 0) throw.
class EqualityCollector {
 public:
  void add(std::map<std::uint32_t, double> terms, double rhs);
  std::vector<EqRow> take() { return std::move(rows_); }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<EqRow> rows_;
  std::unordered_set<std::string> seen_;
};

}  // namespace qbo

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "qbo/instance.hpp"
#include "qbo/model.hpp"
#include "qbo/words.hpp"

namespace qbo {

enum class HierarchyKind { NPA, New, CSPlus };
const char* to_string(HierarchyKind k);

// Moment entry annihilated by the rewrite rules; contributes a constant 0.
inline constexpr std::uint32_t kZeroEntry = 0xffffffffu;

// Maps words to scalar variables of the built instance.
//  NPA:    variable per canonical class of u* v (involution-symmetric,
//          optionally reduced by rewrite rules).
//  New:    variable per unordered pair of row words, no identification.
//  CSPlus: variable per cyclic+reversal class of u* v.
struct MomentLayout {
  HierarchyKind kind = HierarchyKind::NPA;
  int level = 0;
  Alphabet ab;
  std::vector<Word> row_words;  // index set of the moment block
  std::unordered_map<Word, std::uint32_t, WordHash> var_of;  // NPA/CSPlus keys
  std::vector<Word> word_of;    // representative per variable (NPA/CSPlus)
  std::optional<RewriteRules> rules;  // NPA only

  // Variable carrying the moment of (u, v); total on words admissible for
  // the layout (throws WordOutOfRange otherwise); kZeroEntry if annihilated.
  std::uint32_t entry_index(const Word& u, const Word& v) const;

  // NPA/CSPlus: canonical key of u* v under the layout's identification;
  // nullopt when the rewrite rules annihilate the word.
  std::optional<Word> key(const Word& u, const Word& v) const;

  std::vector<std::pair<std::string, int>> block_desc;  // label, size
};

struct Built {
  SDPInstance instance;
  MomentLayout layout;
};

Built build_npa(const BilinearProblem& p, int level,
                const std::optional<RewriteRules>& rules = std::nullopt);

Built build_new(const BilinearProblem& p, int level);

// Linear constraint on the degree-2 moments of the trace cone:
//   sum_{a,b} F(a,b) m(ab) = g * m(empty).
struct MomentEquality {
  Eigen::MatrixXd F;
  double g = 0.0;
};

struct CSPlusQuery {
  int N = 0;
  enum class Mode { Membership, Optimize } mode = Mode::Membership;
  Eigen::MatrixXd K;                 // Membership target Gram matrix
  Eigen::MatrixXd A;                 // Optimize objective on degree-2 moments
  std::vector<MomentEquality> eqs;   // Optimize feasible set
  std::optional<double> bound;       // adds operator-norm localizing blocks
  bool debug_cyclic = false;         // recheck rotation/reversal identification
};

Built build_csplus(const CSPlusQuery& q, int level);

// The rotation/reversal class absorbs trace cyclicity: for all admissible
// u, v and letters a, b the words u*(a)v(b) and (b)u*(a)v share a key.
bool csplus_cyclicity_holds(int N, int level);

}  // namespace qbo

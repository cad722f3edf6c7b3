#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "builder_common.hpp"
#include "qbo/builder.hpp"
#include "qbo/error.hpp"

namespace qbo {

namespace {

// Rotation/reversal class representative: trace moments are invariant under
// cyclic shifts, and m(w*) = m(w) folds in reversal.
Word bracelet_key(Word w, const Alphabet& ab) {
  Word a = canonicalize(w, EquivalenceKind::Cyclic, ab);
  std::reverse(w.begin(), w.end());
  Word b = canonicalize(w, EquivalenceKind::Cyclic, ab);
  return graded_lex_less(a, b) ? a : b;
}

void require_symmetric(const Eigen::MatrixXd& K, int N, const char* what) {
  if (K.rows() != N || K.cols() != N)
    throw Error(Error::Code::DimensionMismatch,
                std::string(what) + " must be " + std::to_string(N) + "x" +
                    std::to_string(N));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(K(i, j) - K(j, i)) > 1e-12)
        throw Error(Error::Code::ValidationFailed,
                    std::string(what) + " must be symmetric");
}

}  // namespace

bool csplus_cyclicity_holds(int N, int level) {
  const Alphabet ab{N, 0};
  int cap_len = level - 1;
  while (cap_len > 0 && words_up_to(N, cap_len) > 200) --cap_len;
  const auto rows = enumerate_words(N, 0, cap_len);
  for (const Word& u : rows)
    for (const Word& v : rows)
      for (Symbol a = 1; a <= static_cast<Symbol>(N); ++a)
        for (Symbol b = 1; b <= static_cast<Symbol>(N); ++b) {
          Word lhs = involution(u);
          lhs.push_back(a);
          lhs.insert(lhs.end(), v.begin(), v.end());
          Word rhs = lhs;
          lhs.push_back(b);          // u*(a)v(b)
          rhs.insert(rhs.begin(), b);  // (b)u*(a)v
          if (bracelet_key(lhs, ab) != bracelet_key(rhs, ab)) return false;
        }
  return true;
}

Built build_csplus(const CSPlusQuery& q, int level) {
  detail::require_level(level);
  if (q.N < 1)
    throw Error(Error::Code::DimensionMismatch, "alphabet must be nonempty");
  if (q.mode == CSPlusQuery::Mode::Membership)
    require_symmetric(q.K, q.N, "membership target");
  else
    require_symmetric(q.A, q.N, "objective");
  if (q.bound && *q.bound <= 0)
    throw Error(Error::Code::ValidationFailed, "bound must be positive");
  if (q.debug_cyclic && !csplus_cyclicity_holds(q.N, level))
    throw Error(Error::Code::ValidationFailed,
                "rotation/reversal identification failed");

  const Alphabet ab{q.N, 0};
  Built out;
  MomentLayout& lay = out.layout;
  lay.kind = HierarchyKind::CSPlus;
  lay.level = level;
  lay.ab = ab;
  lay.row_words = enumerate_words(q.N, 0, level);

  // Every entry below is the class of a word of length <= 2*level; intern
  // them all up front in enumeration order.
  for (const Word& w : enumerate_words(q.N, 0, 2 * level)) {
    Word k = bracelet_key(w, ab);
    if (lay.var_of.emplace(k, static_cast<std::uint32_t>(lay.word_of.size()))
            .second)
      lay.word_of.push_back(std::move(k));
  }
  SDPInstance& inst = out.instance;
  inst.var_count = static_cast<std::uint32_t>(lay.word_of.size());

  auto bv = [&](const Word& w) -> std::uint32_t {
    return lay.var_of.at(bracelet_key(w, ab));
  };
  const std::uint32_t v_empty = bv(Word{});

  auto word2 = [](Symbol a, Symbol b) { return Word{a, b}; };

  const int d = static_cast<int>(lay.row_words.size());
  {
    PSDBlock mom;
    mom.size = d;
    mom.label = "moment";
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i)
        mom.lin.push_back({i, j,
                           bv(concat(involution(lay.row_words[i]),
                                     lay.row_words[j])),
                           1.0});
    inst.blocks.push_back(std::move(mom));
  }

  EqualityCollector eq;
  eq.add({{v_empty, 1.0}}, 1.0);

  auto prefix = [&](int upto) {
    const auto count = words_up_to(q.N, upto);
    return std::vector<Word>(lay.row_words.begin(),
                             lay.row_words.begin() + static_cast<long>(count));
  };

  // Insertion blocks: rows are word pairs; the entry at ((r,u),(s,v)) with
  // letters a, b in the insertion slots is the class of s*(a)r u*(b)v.
  // a == 0 or b == 0 leaves the slot empty. Cyclic symmetry makes every
  // block symmetric as emitted.
  auto emit_insertion = [&](const std::vector<Word>& Ra,
                            const std::vector<Word>& Ua, Symbol a, Symbol b,
                            double scale_empty, const std::string& label) {
    // scale_empty != 0 adds scale_empty * (both slots empty) to the entry,
    // implementing the operator-norm bound C*M0 - Ma >= 0.
    const int nu = static_cast<int>(Ua.size());
    const int R = static_cast<int>(Ra.size()) * nu;
    PSDBlock blk;
    blk.size = R;
    blk.label = label;
    for (int col = 0; col < R; ++col) {
      const Word& s = Ra[col / nu];
      const Word& v = Ua[col % nu];
      for (int row = 0; row <= col; ++row) {
        const Word& r = Ra[row / nu];
        const Word& u = Ua[row % nu];
        Word w = detail::join(s, a, r);
        Word tail = detail::join(u, b, v);
        w.insert(w.end(), tail.begin(), tail.end());
        std::map<std::uint32_t, double> acc;
        acc[bv(w)] += (scale_empty != 0.0) ? -1.0 : 1.0;
        if (scale_empty != 0.0) {
          Word w0 = detail::join(s, 0, r);
          Word tail0 = detail::join(u, 0, v);
          w0.insert(w0.end(), tail0.begin(), tail0.end());
          acc[bv(w0)] += scale_empty;
        }
        for (const auto& [var, coef] : acc)
          if (coef != 0.0) blk.lin.push_back({row, col, var, coef});
      }
    }
    inst.blocks.push_back(std::move(blk));
  };

  if (level % 2 == 1) {
    const std::vector<Word> half = prefix((level - 1) / 2);
    for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
      for (Symbol b = a; b <= static_cast<Symbol>(q.N); ++b)
        emit_insertion(half, half, a, b, 0.0,
                       "ins:" + std::to_string(a) + "," + std::to_string(b));
    for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
      emit_insertion(half, half, a, 0, 0.0, "ins:" + std::to_string(a));
    if (q.bound)
      for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
        emit_insertion(half, half, a, 0, *q.bound,
                       "bound:" + std::to_string(a));
  } else {
    const std::vector<Word> mid = prefix(level / 2);
    const std::vector<Word> small = prefix((level - 2) / 2);
    emit_insertion(mid, mid, 0, 0, 0.0, "ins:1,1");
    for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
      emit_insertion(small, mid, a, 0, 0.0, "ins:" + std::to_string(a));
    for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
      for (Symbol b = a; b <= static_cast<Symbol>(q.N); ++b)
        emit_insertion(small, small, a, b, 0.0,
                       "ins:" + std::to_string(a) + "," + std::to_string(b));
    if (q.bound)
      for (Symbol a = 1; a <= static_cast<Symbol>(q.N); ++a)
        emit_insertion(small, mid, a, 0, *q.bound,
                       "bound:" + std::to_string(a));
  }

  if (q.mode == CSPlusQuery::Mode::Membership) {
    for (int i = 0; i < q.N; ++i)
      for (int j = i; j < q.N; ++j) {
        std::map<std::uint32_t, double> row;
        row[bv(word2(static_cast<Symbol>(i + 1), static_cast<Symbol>(j + 1)))] += 1.0;
        row[v_empty] -= q.K(i, j);
        eq.add(std::move(row), 0.0);
      }
  } else {
    std::map<std::uint32_t, double> obj;
    for (int i = 0; i < q.N; ++i)
      for (int j = i; j < q.N; ++j) {
        const double coef = (i == j) ? q.A(i, i) : q.A(i, j) + q.A(j, i);
        if (coef != 0.0)
          obj[bv(word2(static_cast<Symbol>(i + 1), static_cast<Symbol>(j + 1)))] +=
              coef;
      }
    for (const auto& [var, coef] : obj)
      if (coef != 0.0) inst.objective.push_back({var, coef});
    for (const auto& meq : q.eqs) {
      require_symmetric(meq.F, q.N, "moment equality");
      std::map<std::uint32_t, double> row;
      for (int i = 0; i < q.N; ++i)
        for (int j = i; j < q.N; ++j) {
          const double coef = (i == j) ? meq.F(i, i) : meq.F(i, j) + meq.F(j, i);
          if (coef != 0.0)
            row[bv(word2(static_cast<Symbol>(i + 1),
                         static_cast<Symbol>(j + 1)))] += coef;
        }
      row[v_empty] -= meq.g;
      eq.add(std::move(row), 0.0);
    }
  }

  inst.equalities = eq.take();
  inst.meta.kind = to_string(HierarchyKind::CSPlus);
  inst.meta.level = level;
  inst.meta.info["N"] = std::to_string(q.N);
  inst.meta.info["mode"] =
      q.mode == CSPlusQuery::Mode::Membership ? "membership" : "optimize";
  for (const auto& b : inst.blocks) lay.block_desc.push_back({b.label, b.size});
  inst.check();
  return out;
}

}  // namespace qbo

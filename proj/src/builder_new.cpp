#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "builder_common.hpp"
#include "qbo/builder.hpp"
#include "qbo/error.hpp"

namespace qbo {

namespace {

std::uint64_t tri(std::uint64_t i, std::uint64_t j) {  // i >= j
  return i * (i + 1) / 2 + j;
}

struct PairIndexer {
  int S;
  std::uint32_t operator()(const Word& a, const Word& b) const {
    std::uint64_t i = word_rank(a, S), j = word_rank(b, S);
    if (i < j) std::swap(i, j);
    return static_cast<std::uint32_t>(tri(i, j));
  }
};

// Positivity block for the pair (f, g) over row words (r, u) in Ra x Ua.
// The raw entry at ((r,u),(s,v)) is sum f_t1 g_t2 x{r*(t1)s, u*(t2)v};
// transposition maps each moment to its reversal pair, which is a distinct
// variable here, so the block is emitted as its symmetric part plus
// equalities forcing the antisymmetric part to vanish (true moments are
// reversal-invariant).
void emit_pair_block(const std::vector<Word>& Ra, const std::vector<Word>& Ua,
                     const detail::Support& f, const detail::Support& g,
                     const std::string& label, const PairIndexer& pv,
                     SDPInstance& inst, EqualityCollector& eq) {
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
      std::map<std::uint32_t, double> fwd, bwd;
      for (const auto& [t1, c1] : f.terms)
        for (const auto& [t2, c2] : g.terms) {
          fwd[pv(detail::join(r, t1, s), detail::join(u, t2, v))] += c1 * c2;
          bwd[pv(detail::join(s, t1, r), detail::join(v, t2, u))] += c1 * c2;
        }
      std::map<std::uint32_t, double> sym;
      for (const auto& [var, c] : fwd) sym[var] += 0.5 * c;
      for (const auto& [var, c] : bwd) sym[var] += 0.5 * c;
      for (const auto& [var, c] : sym)
        if (c != 0.0) blk.lin.push_back({row, col, var, c});
      if (row < col) {
        std::map<std::uint32_t, double> dif = fwd;
        for (const auto& [var, c] : bwd) dif[var] -= c;
        eq.add(std::move(dif), 0.0);
      }
    }
  }
  inst.blocks.push_back(std::move(blk));
}

}  // namespace

Built build_new(const BilinearProblem& p, int level) {
  detail::require_level(level);
  detail::require_valid(p);
  const Alphabet ab = p.alphabet();
  const int S = ab.size();

  Built out;
  MomentLayout& lay = out.layout;
  lay.kind = HierarchyKind::New;
  lay.level = level;
  lay.ab = ab;
  lay.row_words = enumerate_words(p.N, p.M, level);
  const std::uint64_t D = lay.row_words.size();
  if (D * (D + 1) / 2 > default_word_cap())
    throw Error(Error::Code::LevelTooLarge,
                "pair variable count " + std::to_string(D * (D + 1) / 2) +
                    " exceeds cap");

  SDPInstance& inst = out.instance;
  inst.var_count = static_cast<std::uint32_t>(D * (D + 1) / 2);
  const PairIndexer pv{S};

  {
    PSDBlock mom;
    mom.size = static_cast<int>(D);
    mom.label = "moment";
    for (std::uint64_t j = 0; j < D; ++j)
      for (std::uint64_t i = 0; i <= j; ++i)
        mom.lin.push_back({static_cast<int>(i), static_cast<int>(j),
                           static_cast<std::uint32_t>(tri(j, i)), 1.0});
    inst.blocks.push_back(std::move(mom));
  }

  EqualityCollector eq;
  eq.add({{static_cast<std::uint32_t>(tri(0, 0)), 1.0}}, 1.0);

  auto [nonneg, zero] = detail::split_supports(p);
  detail::Support one;
  one.terms = {{0, 1.0}};
  one.label = "1";

  auto prefix = [&](int upto) {
    const auto count = words_up_to(S, upto);
    return std::vector<Word>(lay.row_words.begin(),
                             lay.row_words.begin() + static_cast<long>(count));
  };

  if (level % 2 == 1) {
    // Odd level: one block per unordered pair from the inequality set
    // extended by the constant.
    const std::vector<Word> half = prefix((level - 1) / 2);
    std::vector<detail::Support> F;
    F.push_back(one);
    F.insert(F.end(), nonneg.begin(), nonneg.end());
    for (std::size_t a = 0; a < F.size(); ++a)
      for (std::size_t b = a; b < F.size(); ++b)
        emit_pair_block(half, half, F[a], F[b],
                        "pos:" + F[a].label + "," + F[b].label, pv, inst, eq);
  } else {
    // Even level: the constant pair uses rows up to level/2, mixed pairs
    // shorten the constrained factor by one.
    const std::vector<Word> mid = prefix(level / 2);
    const std::vector<Word> small = prefix((level - 2) / 2);
    emit_pair_block(mid, mid, one, one, "pos:1,1", pv, inst, eq);
    for (const auto& f : nonneg)
      emit_pair_block(small, mid, f, one, "pos:" + f.label + ",1", pv, inst, eq);
    for (std::size_t a = 0; a < nonneg.size(); ++a)
      for (std::size_t b = a; b < nonneg.size(); ++b)
        emit_pair_block(small, small, nonneg[a], nonneg[b],
                        "pos:" + nonneg[a].label + "," + nonneg[b].label, pv,
                        inst, eq);
  }

  // Equalities hold against every moment row: for all splits (r, s) with
  // total length < level and all row words w, sum f_t x{r*(t)s, w} = 0.
  for (const auto& f : zero) {
    const std::vector<Word> rs = prefix(level - 1);
    for (const Word& r : rs) {
      const auto smax = words_up_to(S, level - 1 - static_cast<int>(r.size()));
      for (std::uint64_t si = 0; si < smax; ++si) {
        const Word& s = lay.row_words[si];
        for (const Word& w : lay.row_words) {
          std::map<std::uint32_t, double> acc;
          for (const auto& [t, c] : f.terms)
            acc[pv(detail::join(r, t, s), w)] += c;
          eq.add(std::move(acc), 0.0);
        }
      }
    }
  }

  std::map<std::uint32_t, double> obj;
  for (int al = 1; al <= p.N; ++al)
    for (int be = 1; be <= p.M; ++be)
      if (p.A(al - 1, be - 1) != 0.0)
        obj[pv(Word{static_cast<Symbol>(al)},
               Word{static_cast<Symbol>(p.N + be)})] += p.A(al - 1, be - 1);
  for (int al = 1; al <= p.N; ++al)
    if (p.a[al - 1] != 0.0) obj[pv(Word{static_cast<Symbol>(al)}, {})] += p.a[al - 1];
  for (int be = 1; be <= p.M; ++be)
    if (p.b[be - 1] != 0.0)
      obj[pv(Word{static_cast<Symbol>(p.N + be)}, {})] += p.b[be - 1];
  for (const auto& [var, coef] : obj)
    if (coef != 0.0) inst.objective.push_back({var, coef});
  inst.obj_const = p.c;

  inst.equalities = eq.take();
  inst.meta.kind = to_string(HierarchyKind::New);
  inst.meta.level = level;
  inst.meta.info["N"] = std::to_string(p.N);
  inst.meta.info["M"] = std::to_string(p.M);
  for (const auto& b : inst.blocks) lay.block_desc.push_back({b.label, b.size});
  inst.check();
  return out;
}

}  // namespace qbo

#include <algorithm>
#include <map>

#include "builder_common.hpp"
#include "qbo/builder.hpp"
#include "qbo/error.hpp"

namespace qbo {

const char* to_string(HierarchyKind k) {
  switch (k) {
    case HierarchyKind::NPA: return "npa";
    case HierarchyKind::New: return "new";
    case HierarchyKind::CSPlus: return "csplus";
  }
  return "?";
}

namespace {

// Commutation normal form, then the optional rewrite; nullopt = annihilated.
std::optional<Word> reduce_word(Word w, const Alphabet& ab,
                                const std::optional<RewriteRules>& rules) {
  w = canonicalize(w, EquivalenceKind::ZYCommutation, ab);
  if (rules && rules->active()) {
    auto r = rewrite(w, *rules);
    if (!r) return std::nullopt;
    w = std::move(*r);
  }
  return w;
}

std::uint64_t tri(std::uint64_t i, std::uint64_t j) {  // i >= j
  return i * (i + 1) / 2 + j;
}

}  // namespace

std::optional<Word> MomentLayout::key(const Word& u, const Word& v) const {
  Word w = concat(involution(u), v);
  switch (kind) {
    case HierarchyKind::CSPlus: {
      Word a = canonicalize(w, EquivalenceKind::Cyclic, ab);
      std::reverse(w.begin(), w.end());
      Word b = canonicalize(w, EquivalenceKind::Cyclic, ab);
      return graded_lex_less(a, b) ? a : b;
    }
    case HierarchyKind::NPA: {
      // The moment of a word equals the moment of its reversal, so the key
      // is the smaller of the two reduced forms. Annihilation is
      // reversal-symmetric; assert both branches agree.
      auto k1 = reduce_word(w, ab, rules);
      auto k2 = reduce_word(involution(w), ab, rules);
      if (!k1 != !k2)
        throw Error(Error::Code::ValidationFailed,
                    "rewrite annihilation not reversal-symmetric");
      if (!k1) return std::nullopt;
      return graded_lex_less(*k1, *k2) ? *k1 : *k2;
    }
    case HierarchyKind::New:
      throw Error(Error::Code::ValidationFailed,
                  "pair layout has no single-word keys");
  }
  return std::nullopt;
}

std::uint32_t MomentLayout::entry_index(const Word& u, const Word& v) const {
  const int S = ab.size();
  auto check = [&](const Word& w) {
    if (static_cast<int>(w.size()) > level)
      throw Error(Error::Code::WordOutOfRange,
                  "word length " + std::to_string(w.size()) +
                      " exceeds level " + std::to_string(level));
    for (Symbol s : w)
      if (s < 1 || static_cast<int>(s) > S)
        throw Error(Error::Code::WordOutOfRange,
                    "symbol " + std::to_string(s) + " outside alphabet");
  };
  check(u);
  check(v);
  if (kind == HierarchyKind::New) {
    std::uint64_t i = word_rank(u, S), j = word_rank(v, S);
    if (i < j) std::swap(i, j);
    return static_cast<std::uint32_t>(tri(i, j));
  }
  auto k = key(u, v);
  if (!k) return kZeroEntry;
  auto it = var_of.find(*k);
  if (it == var_of.end())
    throw Error(Error::Code::WordOutOfRange, "word class not in layout");
  return it->second;
}

Built build_npa(const BilinearProblem& p, int level,
                const std::optional<RewriteRules>& rules) {
  detail::require_level(level);
  detail::require_valid(p);
  const Alphabet ab = p.alphabet();

  Built out;
  MomentLayout& lay = out.layout;
  lay.kind = HierarchyKind::NPA;
  lay.level = level;
  lay.ab = ab;
  lay.rules = rules;
  lay.row_words = enumerate_words(p.N, p.M, level);
  const int d = static_cast<int>(lay.row_words.size());
  const int dL = static_cast<int>(words_up_to(ab.size(), level - 1));

  SDPInstance& inst = out.instance;

  // Interns the key class of w, returning its variable (kZeroEntry if the
  // rewrite annihilates it).
  auto key_var = [&](const Word& w) -> std::uint32_t {
    auto k = lay.key(Word{}, w);
    if (!k) return kZeroEntry;
    auto it = lay.var_of.find(*k);
    if (it != lay.var_of.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(lay.word_of.size());
    lay.var_of.emplace(*k, id);
    lay.word_of.push_back(*k);
    return id;
  };

  // Moment block; entry (i, j) carries the class of rows[i]* rows[j].
  {
    PSDBlock mom;
    mom.size = d;
    mom.label = "moment";
    for (int j = 0; j < d; ++j)
      for (int i = 0; i <= j; ++i) {
        const std::uint32_t v =
            key_var(concat(involution(lay.row_words[i]), lay.row_words[j]));
        if (v != kZeroEntry) mom.lin.push_back({i, j, v, 1.0});
      }
    inst.blocks.push_back(std::move(mom));
  }

  const auto [nonneg, zero] = detail::split_supports(p);
  EqualityCollector eq;
  eq.add({{key_var(Word{}), 1.0}}, 1.0);

  // One localizing block per inequality; entries are f applied between row
  // words one level down.
  for (const auto& f : nonneg) {
    PSDBlock blk;
    blk.size = dL;
    blk.label = "loc:" + f.label;
    for (int j = 0; j < dL; ++j)
      for (int i = 0; i <= j; ++i) {
        std::map<std::uint32_t, double> acc;
        for (const auto& [sym, coef] : f.terms) {
          const std::uint32_t v = key_var(
              detail::join(lay.row_words[i], sym, lay.row_words[j]));
          if (v != kZeroEntry) acc[v] += coef;
        }
        for (const auto& [var, coef] : acc)
          if (coef != 0.0) blk.lin.push_back({i, j, var, coef});
      }
    inst.blocks.push_back(std::move(blk));
  }

  // Equalities get scalar rows instead of a localizing block: one insertion
  // index one level down, against every co-index of the full moment layout.
  // The extra rows beyond the block's range hold for any operator solution
  // and tie diagonal moments that the inequality blocks alone leave loose.
  for (const auto& f : zero)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < dL; ++j) {
        std::map<std::uint32_t, double> acc;
        for (const auto& [sym, coef] : f.terms) {
          const std::uint32_t v = key_var(
              detail::join(lay.row_words[i], sym, lay.row_words[j]));
          if (v != kZeroEntry) acc[v] += coef;
        }
        eq.add(std::move(acc), 0.0);
      }

  std::map<std::uint32_t, double> obj;
  for (int al = 1; al <= p.N; ++al)
    for (int be = 1; be <= p.M; ++be) {
      const double coef = p.A(al - 1, be - 1);
      if (coef == 0.0) continue;
      const std::uint32_t v =
          key_var(Word{static_cast<Symbol>(al), static_cast<Symbol>(p.N + be)});
      if (v != kZeroEntry) obj[v] += coef;
    }
  for (int al = 1; al <= p.N; ++al)
    if (p.a[al - 1] != 0.0) obj[key_var(Word{static_cast<Symbol>(al)})] += p.a[al - 1];
  for (int be = 1; be <= p.M; ++be)
    if (p.b[be - 1] != 0.0)
      obj[key_var(Word{static_cast<Symbol>(p.N + be)})] += p.b[be - 1];
  for (const auto& [var, coef] : obj)
    if (coef != 0.0) inst.objective.push_back({var, coef});
  inst.obj_const = p.c;

  inst.equalities = eq.take();
  inst.var_count = static_cast<std::uint32_t>(lay.word_of.size());
  inst.meta.kind = to_string(HierarchyKind::NPA);
  inst.meta.level = level;
  inst.meta.info["N"] = std::to_string(p.N);
  inst.meta.info["M"] = std::to_string(p.M);
  for (const auto& b : inst.blocks) lay.block_desc.push_back({b.label, b.size});
  inst.check();
  return out;
}

}  // namespace qbo

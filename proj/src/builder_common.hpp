#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qbo/builder.hpp"
#include "qbo/error.hpp"
#include "qbo/model.hpp"

namespace qbo::detail {

// Sparse affine form over symbols; index 0 is the constant slot.
struct Support {
  std::vector<std::pair<int, double>> terms;
  std::string label;
};

// involution(left) (sym) right, with sym == 0 inserting nothing.
inline Word join(const Word& left, int sym, const Word& right) {
  Word w = involution(left);
  if (sym != 0) w.push_back(static_cast<Symbol>(sym));
  w.insert(w.end(), right.begin(), right.end());
  return w;
}

// Splits the materialized constraint set into inequality and equality
// supports, labeled by side and position.
inline std::pair<std::vector<Support>, std::vector<Support>> split_supports(
    const BilinearProblem& p) {
  auto [G, K] = materialized_constraints(p);
  std::vector<Support> nn, zz;
  auto push = [&](const AffineConstraint& f, char side, std::size_t idx) {
    Support s;
    for (std::size_t t = 0; t < f.coeffs.size(); ++t)
      if (f.coeffs[t] != 0.0)
        s.terms.push_back({static_cast<int>(t), f.coeffs[t]});
    if (s.terms.empty()) return;
    s.label = std::string(1, side) + std::to_string(idx);
    (f.sense == Sense::NonNeg ? nn : zz).push_back(std::move(s));
  };
  for (std::size_t i = 0; i < G.size(); ++i) push(G[i], 'z', i);
  for (std::size_t i = 0; i < K.size(); ++i) push(K[i], 'y', i);
  return {std::move(nn), std::move(zz)};
}

inline void require_level(int level) {
  if (level < 1)
    throw Error(Error::Code::DimensionMismatch, "hierarchy level must be >= 1");
}

inline void require_valid(const BilinearProblem& p) {
  ValidationReport rep = validate(p);
  if (!rep.ok)
    throw Error(Error::Code::ValidationFailed, rep.to_string());
}

}  // namespace qbo::detail

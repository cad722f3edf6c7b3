#include "qbo/game.hpp"

#include <cmath>

#include "qbo/error.hpp"
#include "qbo/oracle.hpp"

namespace qbo {

void Game::check() const {
  if (Q1 < 1 || Q2 < 1 || A1 < 1 || A2 < 1)
    throw Error(Error::Code::ValidationFailed, "game needs nonempty sets");
  if (pi.size() != static_cast<std::size_t>(Q1))
    throw Error(Error::Code::DimensionMismatch, "pi rows != Q1");
  Rat sum = 0;
  for (const auto& row : pi) {
    if (row.size() != static_cast<std::size_t>(Q2))
      throw Error(Error::Code::DimensionMismatch, "pi cols != Q2");
    for (const Rat& v : row) {
      if (v < 0) throw Error(Error::Code::ValidationFailed, "pi negative");
      sum += v;
    }
  }
  if (std::abs(rat_to_double(sum) - 1.0) > 1e-12)
    throw Error(Error::Code::ValidationFailed, "pi does not sum to 1");
  if (V.size() != static_cast<std::size_t>(Q1) * Q2 * A1 * A2)
    throw Error(Error::Code::DimensionMismatch, "V size mismatch");
  for (std::uint8_t b : V)
    if (b > 1) throw Error(Error::Code::ValidationFailed, "V entries must be 0/1");
}

namespace {

// Shared exact construction; the double problem is its rounding.
RatProblem game_to_rational(const Game& g) {
  g.check();
  RatProblem p;
  p.N = g.Q1 * g.A1;
  p.M = g.Q2 * g.A2;
  p.A.assign(p.N, std::vector<Rat>(p.M, 0));
  p.a.assign(p.N, 0);
  p.b.assign(p.M, 0);
  for (int q1 = 0; q1 < g.Q1; ++q1)
    for (int q2 = 0; q2 < g.Q2; ++q2)
      for (int a1 = 0; a1 < g.A1; ++a1)
        for (int a2 = 0; a2 < g.A2; ++a2)
          if (g.v(q1, q2, a1, a2))
            p.A[q1 * g.A1 + a1][q2 * g.A2 + a2] = g.pi[q1][q2];

  const int total = 1 + p.N + p.M;
  auto box = [&](std::vector<RatConstraint>& dst, int var) {
    RatConstraint f;
    f.coeffs.assign(total, 0);
    f.coeffs[static_cast<std::size_t>(var)] = 1;
    f.sense = Sense::NonNeg;
    dst.push_back(std::move(f));
  };
  auto simplex = [&](std::vector<RatConstraint>& dst, int first, int count) {
    RatConstraint f;
    f.coeffs.assign(total, 0);
    f.coeffs[0] = -1;
    for (int i = 0; i < count; ++i) f.coeffs[static_cast<std::size_t>(first + i)] = 1;
    f.sense = Sense::Zero;
    dst.push_back(std::move(f));
  };
  for (int q1 = 0; q1 < g.Q1; ++q1) {
    simplex(p.G, 1 + q1 * g.A1, g.A1);
    for (int a1 = 0; a1 < g.A1; ++a1) box(p.G, 1 + q1 * g.A1 + a1);
  }
  for (int q2 = 0; q2 < g.Q2; ++q2) {
    simplex(p.K, 1 + p.N + q2 * g.A2, g.A2);
    for (int a2 = 0; a2 < g.A2; ++a2) box(p.K, 1 + p.N + q2 * g.A2 + a2);
  }
  return p;
}

}  // namespace

BilinearProblem game_to_problem(const Game& g) {
  return to_double(game_to_rational(g), 1.0, true);
}

Rat game_classical_value(const Game& g, std::uint64_t cap) {
  return classical_value(game_to_rational(g), cap).value;
}

Built build_game(const Game& g, HierarchyKind kind, int level) {
  const BilinearProblem p = game_to_problem(g);
  if (kind == HierarchyKind::New) return build_new(p, level);
  if (kind != HierarchyKind::NPA)
    throw Error(Error::Code::ValidationFailed, "games build npa or new only");
  // Outcomes of one question form a projective measurement: repeated outcomes
  // collapse, distinct outcomes of the same question annihilate.
  RewriteRules rules;
  rules.group.assign(static_cast<std::size_t>(1 + p.N + p.M), 0);
  for (int q1 = 0; q1 < g.Q1; ++q1)
    for (int a1 = 0; a1 < g.A1; ++a1)
      rules.group[static_cast<std::size_t>(1 + q1 * g.A1 + a1)] = 1 + q1;
  for (int q2 = 0; q2 < g.Q2; ++q2)
    for (int a2 = 0; a2 < g.A2; ++a2)
      rules.group[static_cast<std::size_t>(1 + p.N + q2 * g.A2 + a2)] = 1 + g.Q1 + q2;
  return build_npa(p, level, rules);
}

SolveResult game_sdp_value(const Game& g, HierarchyKind kind, int level,
                           const SolveOptions& opts) {
  return solve(build_game(g, kind, level).instance, opts);
}

Game chsh_game() {
  Game g;
  g.Q1 = g.Q2 = g.A1 = g.A2 = 2;
  g.pi.assign(2, std::vector<Rat>(2, Rat(1, 4)));
  g.V.assign(16, 0);
  for (int q1 = 0; q1 < 2; ++q1)
    for (int q2 = 0; q2 < 2; ++q2)
      for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
          g.V[static_cast<std::size_t>(((q1 * 2 + q2) * 2 + a1) * 2 + a2)] =
              static_cast<std::uint8_t>(((a1 ^ a2) == (q1 & q2)) ? 1 : 0);
  return g;
}

Game transpose_game(const Game& g) {
  Game t;
  t.Q1 = g.Q2;
  t.Q2 = g.Q1;
  t.A1 = g.A2;
  t.A2 = g.A1;
  t.pi.assign(static_cast<std::size_t>(t.Q1), std::vector<Rat>(static_cast<std::size_t>(t.Q2), 0));
  for (int q1 = 0; q1 < g.Q1; ++q1)
    for (int q2 = 0; q2 < g.Q2; ++q2) t.pi[q2][q1] = g.pi[q1][q2];
  t.V.assign(g.V.size(), 0);
  for (int q1 = 0; q1 < g.Q1; ++q1)
    for (int q2 = 0; q2 < g.Q2; ++q2)
      for (int a1 = 0; a1 < g.A1; ++a1)
        for (int a2 = 0; a2 < g.A2; ++a2)
          t.V[static_cast<std::size_t>(((q2 * t.Q2 + q1) * t.A1 + a2) * t.A2 + a1)] =
              g.v(q1, q2, a1, a2);
  return t;
}

}  // namespace qbo

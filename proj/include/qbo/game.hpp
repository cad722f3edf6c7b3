#pragma once

#include <cstdint>
#include <vector>

#include "qbo/builder.hpp"
#include "qbo/model.hpp"
#include "qbo/rational.hpp"
#include "qbo/solve.hpp"

namespace qbo {

// Two-prover one-round game: referee draws (q1,q2) ~ pi, players answer
// (a1,a2), they win when V = 1.
struct Game {
  int Q1 = 0, Q2 = 0, A1 = 0, A2 = 0;
  std::vector<std::vector<Rat>> pi;  // Q1 x Q2, nonnegative, sums to 1
  std::vector<std::uint8_t> V;       // flat [q1][q2][a1][a2]

  std::uint8_t v(int q1, int q2, int a1, int a2) const {
    return V[static_cast<std::size_t>(((q1 * Q2 + q2) * A1 + a1) * A2 + a2)];
  }
  void check() const;  // invariants; throws ValidationFailed
};

// z_(q1,a1) at symbol 1 + q1*A1 + a1, y_(q2,a2) at N + 1 + q2*A2 + a2;
// objective A = pi(q1,q2) V; per-question simplex + boxes; bound_C = 1.
BilinearProblem game_to_problem(const Game& g);

// Exact optimum over deterministic strategies. One side is enumerated
// (|A|^|Q| capped), the other best-responds per question.
Rat game_classical_value(const Game& g, std::uint64_t cap = default_enum_cap());

// Moment relaxation of the game problem. NPA gets projective rewrite rules
// (answers of one question collapse/annihilate); the pair hierarchy takes the
// problem as-is.
Built build_game(const Game& g, HierarchyKind kind, int level);

SolveResult game_sdp_value(const Game& g, HierarchyKind kind, int level,
                           const SolveOptions& opts = {});

Game chsh_game();

// Players swapped: pi transposed, V with roles exchanged. The SDP value is
// invariant under this relabeling.
Game transpose_game(const Game& g);

}  // namespace qbo

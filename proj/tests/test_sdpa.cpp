#include <doctest.h>

#include "helpers.hpp"
#include "qbo/builder.hpp"
#include "qbo/game.hpp"
#include "qbo/sdpa_io.hpp"
#include "qbo/solve.hpp"

using namespace qbo;
using namespace qbo::testing;

TEST_CASE("annotated export round-trips byte-identically") {
  const Built built = build_game(chsh_game(), HierarchyKind::NPA, 1);
  const std::string text = export_sdpa_string(built.instance);
  const SDPInstance back = import_sdpa_string(text);
  CHECK(export_sdpa_string(back) == text);

  CHECK(back.var_count == built.instance.var_count);
  CHECK(back.blocks.size() == built.instance.blocks.size());
  CHECK(back.equalities.size() == built.instance.equalities.size());
  CHECK(back.obj_const == built.instance.obj_const);
  CHECK(back.meta.kind == built.instance.meta.kind);
  CHECK(back.meta.level == built.instance.meta.level);
  CHECK(back.meta.info == built.instance.meta.info);
  for (std::size_t j = 0; j < back.blocks.size(); ++j) {
    CHECK(back.blocks[j].size == built.instance.blocks[j].size);
    CHECK(back.blocks[j].label == built.instance.blocks[j].label);
  }

  const SolveResult a = solve(built.instance);
  const SolveResult b = solve(back);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(std::abs(a.value - b.value) < 1e-9);
}

TEST_CASE("round-trip preserves a pair-hierarchy instance with equalities") {
  std::mt19937 rng(21);
  const BilinearProblem p = random_problem(rng, 2, 1, true, false);
  const Built built = build_new(p, 2);
  const std::string text = export_sdpa_string(built.instance);
  const SDPInstance back = import_sdpa_string(text);
  CHECK(export_sdpa_string(back) == text);
  CHECK(back.equalities.size() == built.instance.equalities.size());
  for (std::size_t i = 0; i < back.equalities.size(); ++i) {
    CHECK(back.equalities[i].rhs == built.instance.equalities[i].rhs);
    CHECK(back.equalities[i].terms.size() ==
          built.instance.equalities[i].terms.size());
  }
}

TEST_CASE("foreign files import with diagonal blocks split") {
  const std::string text =
      "\"hand-written example\"\n"
      "2\n"
      "2\n"
      "2 -2\n"
      "1.0 2.0\n"
      "0 1 1 2 0.5\n"
      "1 1 1 1 1.0\n"
      "1 2 1 1 1.0\n"
      "2 1 2 2 1.0\n"
      "2 2 2 2 1.0\n";
  const SDPInstance inst = import_sdpa_string(text);
  CHECK(inst.var_count == 2);
  CHECK(inst.equalities.empty());
  REQUIRE(inst.blocks.size() == 3);  // one 2x2, diagonal block split into 1x1
  CHECK(inst.blocks[0].size == 2);
  CHECK(inst.blocks[1].size == 1);
  CHECK(inst.blocks[2].size == 1);
  // SDPA minimizes c'x; the instance maximizes, so the objective is negated.
  REQUIRE(inst.objective.size() == 2);
  CHECK(inst.objective[0].coef == -1.0);
  CHECK(inst.objective[1].coef == -2.0);

  // Entries below the diagonal are folded onto the upper triangle.
  const std::string swapped =
      "1\n1\n2\n1.0\n"
      "0 1 2 1 0.25\n"
      "1 1 1 1 1.0\n";
  const SDPInstance s = import_sdpa_string(swapped);
  REQUIRE(s.blocks.size() == 1);
  REQUIRE(s.blocks[0].cst.size() == 1);
  CHECK(s.blocks[0].cst[0].r == 0);
  CHECK(s.blocks[0].cst[0].c == 1);
  // F0 enters negated: the block is sum x_i F_i - F0.
  CHECK(s.blocks[0].cst[0].value == -0.25);
}

TEST_CASE("import rejects malformed input") {
  CHECK_THROWS_AS(import_sdpa_string(""), Error);
  // Block structure does not match the declared block count.
  CHECK_THROWS_AS(import_sdpa_string("1\n2\n2\n1.0\n"), Error);
  // Entry outside the declared block.
  CHECK_THROWS_AS(import_sdpa_string("1\n1\n2\n1.0\n1 1 3 3 1.0\n"), Error);
  // Off-diagonal entry inside a diagonal block.
  CHECK_THROWS_AS(import_sdpa_string("1\n1\n-2\n1.0\n1 1 1 2 1.0\n"), Error);
  // Matrix index above mDIM.
  CHECK_THROWS_AS(import_sdpa_string("1\n1\n2\n1.0\n2 1 1 1 1.0\n"), Error);
  // Wrong objective length.
  CHECK_THROWS_AS(import_sdpa_string("2\n1\n2\n1.0\n"), Error);
}

TEST_CASE("empty instances are not exportable") {
  SDPInstance inst;
  CHECK_THROWS_AS(export_sdpa_string(inst), Error);
}

TEST_CASE("file round trip") {
  const Built built = build_game(chsh_game(), HierarchyKind::New, 1);
  const std::string path = "/tmp/qbo_sdpa_roundtrip.dat-s";
  export_sdpa(built.instance, path);
  const SDPInstance back = import_sdpa(path);
  CHECK(export_sdpa_string(back) == export_sdpa_string(built.instance));
  CHECK_THROWS_AS(import_sdpa("/tmp/qbo_missing_file.dat-s"), Error);
}

#include <doctest.h>

#include "qbo/solve.hpp"
#include "qbo/verify.hpp"

using namespace qbo;

namespace {

PSDBlock scalar_block(std::vector<PSDBlock::MapEntry> lin, double cst,
                      const char* label) {
  PSDBlock b;
  b.size = 1;
  b.lin = std::move(lin);
  if (cst != 0.0) b.cst = {{0, 0, cst}};
  b.label = label;
  return b;
}

}  // namespace

TEST_CASE("box maximum") {
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 1.0}};
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 0.0, "x"));
  inst.blocks.push_back(scalar_block({{0, 0, 0, -1.0}}, 1.0, "1-x"));
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(verify(inst, r, 1e-6).pass);
}

TEST_CASE("psd correlation bound") {
  // maximize 2x subject to [[1, x], [x, 1]] >= 0, i.e. |x| <= 1.
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 2.0}};
  PSDBlock b;
  b.size = 2;
  b.lin = {{0, 1, 0, 1.0}};
  b.cst = {{0, 0, 1.0}, {1, 1, 1.0}};
  b.label = "corr";
  inst.blocks.push_back(std::move(b));
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(verify(inst, r, 1e-6).pass);
}

TEST_CASE("equality-coupled maximum") {
  // maximize x0 + 2 x1 with x0 + x1 = 1, both nonnegative: optimum 2.
  SDPInstance inst;
  inst.var_count = 2;
  inst.objective = {{0, 1.0}, {1, 2.0}};
  inst.obj_const = 0.5;
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 0.0, "x0"));
  inst.blocks.push_back(scalar_block({{0, 0, 1, 1.0}}, 0.0, "x1"));
  inst.equalities.push_back({{{0, 1.0}, {1, 1.0}}, 1.0});
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.5).epsilon(1e-7));
  CHECK(std::abs(r.x[0]) < 1e-6);
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(verify(inst, r, 1e-6).pass);
}

TEST_CASE("infeasibility is certified") {
  // x >= 2 and x <= 1 cannot hold together.
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 1.0}};
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, -2.0, "x-2"));
  inst.blocks.push_back(scalar_block({{0, 0, 0, -1.0}}, 1.0, "1-x"));
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Infeasible);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->margin > 0.0);
  const VerifyReport rep = verify(inst, r, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.farkas_margin >= kFarkasMarginFloor);
}

TEST_CASE("equality infeasibility is certified") {
  // x0 = -1 with x0 >= 0.
  SDPInstance inst;
  inst.var_count = 1;
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 0.0, "x0"));
  inst.equalities.push_back({{{0, 1.0}}, -1.0});
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Infeasible);
  REQUIRE(r.certificate.has_value());
  CHECK(verify(inst, r, 1e-6).pass);
}

TEST_CASE("unboundedness is detected") {
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 1.0}};
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 1.0, "1+x"));
  inst.check();

  const SolveResult r = solve(inst);
  CHECK(r.status == SolveStatus::Unbounded);
}

TEST_CASE("phase one separates feasible from infeasible") {
  SDPInstance feas;
  feas.var_count = 1;
  feas.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 0.0, "x"));
  feas.blocks.push_back(scalar_block({{0, 0, 0, -1.0}}, 1.0, "1-x"));
  feas.check();
  const Phase1Result p1 = solve_phase1(feas);
  CHECK(p1.res.status == SolveStatus::Optimal);
  CHECK(p1.tstar <= 1e-7);

  SDPInstance infeas;
  infeas.var_count = 1;
  infeas.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, -2.0, "x-2"));
  infeas.blocks.push_back(scalar_block({{0, 0, 0, -1.0}}, 1.0, "1-x"));
  infeas.check();
  const Phase1Result p2 = solve_phase1(infeas);
  CHECK(p2.res.status == SolveStatus::Optimal);
  CHECK(p2.tstar > 0.1);  // true violation is 0.5
  REQUIRE(p2.res.certificate.has_value());
  SolveResult asked = p2.res;
  asked.status = SolveStatus::Infeasible;
  CHECK(verify(infeas, asked, 1e-6).pass);
}

TEST_CASE("verification rejects tampered claims") {
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 1.0}};
  inst.blocks.push_back(scalar_block({{0, 0, 0, 1.0}}, 0.0, "x"));
  inst.blocks.push_back(scalar_block({{0, 0, 0, -1.0}}, 1.0, "1-x"));
  inst.check();

  SolveResult r = solve(inst);
  REQUIRE(r.status == SolveStatus::Optimal);
  r.value += 0.25;
  CHECK(!verify(inst, r, 1e-6).pass);

  SolveResult wrong = solve(inst);
  wrong.x[0] = 2.0;  // violates 1 - x >= 0
  CHECK(!verify(inst, wrong, 1e-6).pass);

  SolveResult silent = solve(inst);
  silent.status = SolveStatus::Inaccurate;
  CHECK(!verify(inst, silent, 1e-6).pass);
}

TEST_CASE("solving is deterministic") {
  SDPInstance inst;
  inst.var_count = 1;
  inst.objective = {{0, 2.0}};
  PSDBlock b;
  b.size = 2;
  b.lin = {{0, 1, 0, 1.0}};
  b.cst = {{0, 0, 1.0}, {1, 1, 1.0}};
  b.label = "corr";
  inst.blocks.push_back(std::move(b));
  inst.check();

  const SolveResult r1 = solve(inst);
  const SolveResult r2 = solve(inst);
  CHECK(r1.value == r2.value);
  CHECK(r1.iters == r2.iters);
}

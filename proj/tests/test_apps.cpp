#include <doctest.h>

#include <string>

#include "helpers.hpp"
#include "qbo/channel.hpp"
#include "qbo/game.hpp"
#include "qbo/json_io.hpp"
#include "qbo/protocol.hpp"
#include "qbo/solve.hpp"

using namespace qbo;
using namespace qbo::testing;

namespace {
const std::string kData = QBO_DATA_DIR;
}

TEST_CASE("game front-end emits one operator per question-answer pair") {
  const Game g = chsh_game();
  const BilinearProblem p = game_to_problem(g);
  CHECK(p.N == 4);
  CHECK(p.M == 4);
  CHECK(validate(p).ok);
  // Two simplex rows and four lower boxes per side.
  int zero = 0, nonneg = 0;
  for (const auto& f : p.G) (f.sense == Sense::Zero ? zero : nonneg)++;
  CHECK(zero == 2);
  CHECK(nonneg == 4);
  CHECK(p.A(0, 0) == doctest::Approx(0.25));  // winning pair under q=(0,0)
  CHECK(p.A(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("game validation catches malformed tables") {
  Game g = chsh_game();
  g.pi[0][0] = Rat(1, 2);  // sums above one
  CHECK_THROWS_AS(g.check(), Error);
  Game h = chsh_game();
  h.V[0] = 2;
  CHECK_THROWS_AS(h.check(), Error);
  Game e = chsh_game();
  e.V.pop_back();
  CHECK_THROWS_AS(e.check(), Error);
}

TEST_CASE("transposing a game preserves its relaxation value") {
  std::mt19937 rng(12);
  Game g;
  g.Q1 = 2;
  g.Q2 = 2;
  g.A1 = 2;
  g.A2 = 2;
  g.pi = {{Rat(1, 8), Rat(3, 8)}, {Rat(1, 4), Rat(1, 4)}};
  g.V.resize(16);
  for (auto& v : g.V) v = (rng() >> 9) & 1;
  g.check();
  const Game t = transpose_game(g);
  t.check();
  CHECK(game_classical_value(g) == game_classical_value(t));

  const SolveResult a = game_sdp_value(g, HierarchyKind::NPA, 1);
  const SolveResult b = game_sdp_value(t, HierarchyKind::NPA, 1);
  REQUIRE(a.status == SolveStatus::Optimal);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(std::abs(a.value - b.value) <= 1e-6);
}

TEST_CASE("channel front-end shapes and validation") {
  const Channel c = subset_channel();
  CHECK(c.X == 4);
  CHECK(c.Y == 6);
  const BilinearProblem p = channel_to_problem(c);
  CHECK(p.N == 8);    // 2 messages x 4 inputs
  CHECK(p.M == 12);   // 6 outputs x 2 messages
  CHECK(validate(p).ok);

  Channel bad = c;
  bad.W[0][0] = Rat(1, 2);  // column no longer sums to one
  CHECK_THROWS_AS(bad.check(), Error);
  Channel neg = c;
  neg.W[0][0] = Rat(-1, 3);
  CHECK_THROWS_AS(neg.check(), Error);
}

TEST_CASE("bundled data files parse to the built-in fixtures") {
  const Game g = game_from_json(load_json_file(kData + "/chsh.json"));
  const Game ref = chsh_game();
  CHECK(g.Q1 == ref.Q1);
  CHECK(g.V == ref.V);
  CHECK(g.pi == ref.pi);

  const Channel c = channel_from_json(load_json_file(kData + "/subset_channel.json"));
  const Channel cref = subset_channel();
  CHECK(c.X == cref.X);
  CHECK(c.Y == cref.Y);
  CHECK(c.k == cref.k);
  CHECK(c.W == cref.W);

  const Extractor e =
      extractor_from_json(load_json_file(kData + "/parity_extractor.json"));
  const Extractor eref = parity_extractor();
  CHECK(e.n == eref.n);
  CHECK(e.d == eref.d);
  CHECK(e.m == eref.m);
  CHECK(e.table == eref.table);

  const CSPlusQuery k5 = csplus_from_json(load_json_file(kData + "/k5.json"));
  CHECK(k5.mode == CSPlusQuery::Mode::Membership);
  CHECK(k5.N == 5);
  CHECK(k5.K(2, 4) == 3.0);
}

TEST_CASE("json parse errors point at the offending field") {
  using nlohmann::json;
  try {
    game_from_json(json::parse(R"({"Q1":2,"Q2":2,"A1":2})"));
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::ParseError);
    CHECK(std::string(e.what()).find("A2") != std::string::npos);
  }
  try {
    channel_from_json(json::parse(R"({"k":1,"W":[["1/3","x"]]})"));
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Error::Code::ParseError);
    CHECK(std::string(e.what()).find("W") != std::string::npos);
  }
  CHECK_THROWS_AS(load_json_file("/tmp/qbo_does_not_exist.json"), Error);
}

TEST_CASE("problem json round-trips through the builder front door") {
  using nlohmann::json;
  const json j = json::parse(R"({
    "N": 1, "M": 1,
    "A": [[1]],
    "G": [{"coeffs": [0, 1, 0], "sense": "nonneg"},
          {"coeffs": [1, -1, 0], "sense": "nonneg"}],
    "K": [{"coeffs": [0, 0, 1], "sense": "nonneg"},
          {"coeffs": [1, 0, -1], "sense": "nonneg"}]
  })");
  const BilinearProblem p = problem_from_json(j);
  CHECK(p.N == 1);
  CHECK(p.A(0, 0) == 1.0);
  CHECK(validate(p).ok);

  json bad = j;
  bad["G"][0]["coeffs"] = {0, 1};
  CHECK_THROWS_AS(problem_from_json(bad), Error);
  json senseless = j;
  senseless["G"][0]["sense"] = "maybe";
  CHECK_THROWS_AS(problem_from_json(senseless), Error);
}

TEST_CASE("helstrom measurement on orthogonal and identical states") {
  Eigen::MatrixXd rho0 = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd rho1 = Eigen::MatrixXd::Zero(2, 2);
  rho0(0, 0) = 1.0;
  rho1(1, 1) = 1.0;
  const HelstromResult r = helstrom(rho0, rho1);
  CHECK(r.success == doctest::Approx(1.0));
  CHECK(r.projector(0, 0) == doctest::Approx(1.0));
  CHECK(r.projector(1, 1) == doctest::Approx(0.0));

  const HelstromResult same = helstrom(rho0, rho0);
  CHECK(same.success == doctest::Approx(0.5));

  Eigen::MatrixXd not_state = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(helstrom(not_state, rho0), Error);  // trace 2
}

TEST_CASE("classical strategies evaluate through the protocol interface") {
  QuantumProtocol p;
  p.dim = 1;
  p.psi = Eigen::VectorXd::Ones(1);
  auto one = Eigen::MatrixXd::Ones(1, 1);
  auto zero = Eigen::MatrixXd::Zero(1, 1);
  // Message i is sent as input i and decoded as the output read.
  p.enc = {{one, zero}, {zero, one}};
  p.dec = {{one, zero}, {zero, one}};
  CHECK(evaluate_protocol(identity_channel(2, 1), p) == doctest::Approx(1.0));

  QuantumProtocol bad = p;
  bad.enc[0][0] = Eigen::MatrixXd::Ones(1, 1) * 2.0;
  CHECK_THROWS_AS(evaluate_protocol(identity_channel(2, 1), bad), Error);

  QuantumProtocol skewed = p;
  skewed.psi = Eigen::VectorXd::Ones(1) * 0.5;
  CHECK_THROWS_AS(evaluate_protocol(identity_channel(2, 1), skewed), Error);
}

TEST_CASE("the entangled subset-channel protocol hits its target value") {
  const double target = 0.5 + 1.0 / std::sqrt(6.0);
  const double v = evaluate_protocol(subset_channel(), subset_channel_protocol());
  CHECK(std::abs(v - target) <= 1e-10);
}

#include "qbo/json_io.hpp"

#include <fstream>

#include "qbo/error.hpp"

namespace qbo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Error::Code::ParseError, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where + "/" + key, "missing");
  return *it;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

int int_field(const json& j, const char* key, const std::string& where) {
  return get_int(field(j, key, where), where + "/" + key);
}

double rat_as_double(const json& j, const std::string& where) {
  return rat_to_double(rat_from_json(j, where));
}

std::vector<Rat> rat_vector(const json& j, const std::string& where,
                            std::size_t want) {
  if (!j.is_array()) fail(where, "expected an array");
  if (j.size() != want)
    fail(where, "expected " + std::to_string(want) + " entries, got " +
                    std::to_string(j.size()));
  std::vector<Rat> out;
  out.reserve(want);
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rat_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<std::vector<Rat>> rat_matrix(const json& j, const std::string& where,
                                         std::size_t rows, std::size_t cols) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  if (j.size() != rows)
    fail(where, "expected " + std::to_string(rows) + " rows, got " +
                    std::to_string(j.size()));
  std::vector<std::vector<Rat>> out;
  out.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r)
    out.push_back(rat_vector(j[r], where + "/" + std::to_string(r), cols));
  return out;
}

Eigen::MatrixXd dense_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) fail(where + "/0", "expected a nonempty row");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd M(static_cast<long>(rows), static_cast<long>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string wr = where + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != cols) fail(wr, "ragged row");
    for (std::size_t c = 0; c < cols; ++c)
      M(static_cast<long>(r), static_cast<long>(c)) =
          rat_as_double(j[r][c], wr + "/" + std::to_string(c));
  }
  return M;
}

Sense sense_from(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected \"nonneg\" or \"zero\"");
  const std::string s = j.get<std::string>();
  if (s == "nonneg") return Sense::NonNeg;
  if (s == "zero") return Sense::Zero;
  fail(where, "unknown sense \"" + s + "\"");
}

std::vector<RatConstraint> constraints_from(const json& j, const std::string& where,
                                            std::size_t width) {
  if (!j.is_array()) fail(where, "expected an array of constraints");
  std::vector<RatConstraint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string wi = where + "/" + std::to_string(i);
    RatConstraint f;
    f.coeffs = rat_vector(field(j[i], "coeffs", wi), wi + "/coeffs", width);
    f.sense = sense_from(field(j[i], "sense", wi), wi + "/sense");
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Error::Code::IOFailure, "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(Error::Code::ParseError, path + ": " + e.what());
  }
}

Rat rat_from_json(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number()) return rat_from_double(j.get<double>());
  if (j.is_string()) {
    try {
      return rat_from_string(j.get<std::string>());
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }
  fail(where, "expected a number or a \"p/q\" string");
}

RatProblem rat_problem_from_json(const json& j) {
  RatProblem p;
  p.N = int_field(j, "N", "");
  p.M = int_field(j, "M", "");
  if (p.N < 0 || p.M < 0) fail("/N", "dimensions must be nonnegative");
  const std::size_t width = static_cast<std::size_t>(1 + p.N + p.M);
  p.A = rat_matrix(field(j, "A", ""), "/A", static_cast<std::size_t>(p.N),
                   static_cast<std::size_t>(p.M));
  p.a.assign(static_cast<std::size_t>(p.N), 0);
  p.b.assign(static_cast<std::size_t>(p.M), 0);
  if (j.contains("a")) p.a = rat_vector(j["a"], "/a", static_cast<std::size_t>(p.N));
  if (j.contains("b")) p.b = rat_vector(j["b"], "/b", static_cast<std::size_t>(p.M));
  if (j.contains("c")) p.c = rat_from_json(j["c"], "/c");
  if (j.contains("G")) p.G = constraints_from(j["G"], "/G", width);
  if (j.contains("K")) p.K = constraints_from(j["K"], "/K", width);
  return p;
}

BilinearProblem problem_from_json(const json& j) {
  const RatProblem rp = rat_problem_from_json(j);
  double bound = 1.0;
  if (j.contains("bound_C")) bound = rat_as_double(j["bound_C"], "/bound_C");
  BilinearProblem p = to_double(rp, bound, true);
  const ValidationReport rep = validate(p);
  if (!rep.ok) throw Error(Error::Code::ValidationFailed, rep.to_string());
  return p;
}

Game game_from_json(const json& j) {
  Game g;
  g.Q1 = int_field(j, "Q1", "");
  g.Q2 = int_field(j, "Q2", "");
  g.A1 = int_field(j, "A1", "");
  g.A2 = int_field(j, "A2", "");
  if (g.Q1 < 1 || g.Q2 < 1 || g.A1 < 1 || g.A2 < 1)
    fail("/Q1", "set sizes must be positive");
  g.pi = rat_matrix(field(j, "pi", ""), "/pi", static_cast<std::size_t>(g.Q1),
                    static_cast<std::size_t>(g.Q2));
  const json& V = field(j, "V", "");
  if (!V.is_array() || V.size() != static_cast<std::size_t>(g.Q1))
    fail("/V", "expected Q1 slices");
  g.V.assign(static_cast<std::size_t>(g.Q1) * g.Q2 * g.A1 * g.A2, 0);
  for (int q1 = 0; q1 < g.Q1; ++q1) {
    const json& s1 = V[static_cast<std::size_t>(q1)];
    const std::string w1 = "/V/" + std::to_string(q1);
    if (!s1.is_array() || s1.size() != static_cast<std::size_t>(g.Q2)) fail(w1, "expected Q2 slices");
    for (int q2 = 0; q2 < g.Q2; ++q2) {
      const json& s2 = s1[static_cast<std::size_t>(q2)];
      const std::string w2 = w1 + "/" + std::to_string(q2);
      if (!s2.is_array() || s2.size() != static_cast<std::size_t>(g.A1)) fail(w2, "expected A1 rows");
      for (int a1 = 0; a1 < g.A1; ++a1) {
        const json& s3 = s2[static_cast<std::size_t>(a1)];
        const std::string w3 = w2 + "/" + std::to_string(a1);
        if (!s3.is_array() || s3.size() != static_cast<std::size_t>(g.A2)) fail(w3, "expected A2 entries");
        for (int a2 = 0; a2 < g.A2; ++a2) {
          const int v = get_int(s3[static_cast<std::size_t>(a2)], w3 + "/" + std::to_string(a2));
          if (v != 0 && v != 1) fail(w3 + "/" + std::to_string(a2), "predicate entries are 0/1");
          g.V[static_cast<std::size_t>(((q1 * g.Q2 + q2) * g.A1 + a1) * g.A2 + a2)] =
              static_cast<std::uint8_t>(v);
        }
      }
    }
  }
  g.check();
  return g;
}

Channel channel_from_json(const json& j) {
  Channel c;
  c.k = j.contains("k") ? get_int(j["k"], "/k") : 1;
  const json& W = field(j, "W", "");
  if (W.is_object()) {
    c.X = int_field(W, "X", "/W");
    c.Y = int_field(W, "Y", "/W");
    if (c.X < 1 || c.Y < 1) fail("/W/X", "dimensions must be positive");
    c.W.assign(static_cast<std::size_t>(c.Y),
               std::vector<Rat>(static_cast<std::size_t>(c.X), 0));
    const json& entries = field(W, "entries", "/W");
    if (!entries.is_array()) fail("/W/entries", "expected an array of [y, x, value]");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string wi = "/W/entries/" + std::to_string(i);
      const json& t = entries[i];
      if (!t.is_array() || t.size() != 3) fail(wi, "expected [y, x, value]");
      const int y = get_int(t[0], wi + "/0"), x = get_int(t[1], wi + "/1");
      if (y < 0 || y >= c.Y || x < 0 || x >= c.X) fail(wi, "index out of range");
      c.W[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] =
          rat_from_json(t[2], wi + "/2");
    }
  } else {
    if (!W.is_array() || W.empty() || !W[0].is_array() || W[0].empty())
      fail("/W", "expected a row-major matrix");
    c.Y = static_cast<int>(W.size());
    c.X = static_cast<int>(W[0].size());
    c.W = rat_matrix(W, "/W", static_cast<std::size_t>(c.Y), static_cast<std::size_t>(c.X));
  }
  c.check();
  return c;
}

Extractor extractor_from_json(const json& j) {
  Extractor e;
  e.n = int_field(j, "n", "");
  e.d = int_field(j, "d", "");
  e.m = int_field(j, "m", "");
  e.k = j.contains("k") ? rat_as_double(j["k"], "/k") : 1.0;
  if (e.n < 1 || e.n > 20 || e.d < 0 || e.d > 10 || e.m < 1 || e.m > 10)
    fail("/n", "sizes out of range");
  const std::size_t seeds = std::size_t{1} << e.d;
  const std::size_t inputs = std::size_t{1} << e.n;
  const json& table = field(j, "table", "");
  if (!table.is_array() || table.size() != seeds) fail("/table", "expected 2^d rows");
  e.table.assign(seeds, std::vector<std::uint32_t>(inputs, 0));
  for (std::size_t s = 0; s < seeds; ++s) {
    const std::string ws = "/table/" + std::to_string(s);
    if (!table[s].is_array() || table[s].size() != inputs) fail(ws, "expected 2^n entries");
    for (std::size_t i = 0; i < inputs; ++i) {
      const int v = get_int(table[s][i], ws + "/" + std::to_string(i));
      if (v < 0 || v >= (1 << e.m)) fail(ws + "/" + std::to_string(i), "value outside [0, 2^m)");
      e.table[s][i] = static_cast<std::uint32_t>(v);
    }
  }
  e.check();
  return e;
}

CSPlusQuery csplus_from_json(const json& j) {
  CSPlusQuery q;
  if (j.contains("K")) {
    q.mode = CSPlusQuery::Mode::Membership;
    q.K = dense_matrix(j["K"], "/K");
    if (q.K.rows() != q.K.cols()) fail("/K", "matrix must be square");
    q.N = static_cast<int>(q.K.rows());
  } else if (j.contains("A")) {
    q.mode = CSPlusQuery::Mode::Optimize;
    q.A = dense_matrix(j["A"], "/A");
    if (q.A.rows() != q.A.cols()) fail("/A", "matrix must be square");
    q.N = static_cast<int>(q.A.rows());
    if (j.contains("constraints")) {
      const json& cs = j["constraints"];
      if (!cs.is_array()) fail("/constraints", "expected an array");
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string wi = "/constraints/" + std::to_string(i);
        MomentEquality eq;
        eq.F = dense_matrix(field(cs[i], "F", wi), wi + "/F");
        if (eq.F.rows() != q.N || eq.F.cols() != q.N) fail(wi + "/F", "size != N");
        eq.g = rat_as_double(field(cs[i], "g", wi), wi + "/g");
        q.eqs.push_back(std::move(eq));
      }
    }
  } else {
    fail("", "need \"K\" (membership) or \"A\" (optimization)");
  }
  if (j.contains("N") && get_int(j["N"], "/N") != q.N)
    fail("/N", "disagrees with the matrix dimension");
  if (j.contains("bound")) q.bound = rat_as_double(j["bound"], "/bound");
  return q;
}

}  // namespace qbo

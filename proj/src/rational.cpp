#include "qbo/rational.hpp"

#include <cctype>

#include "qbo/error.hpp"

namespace qbo {

Rat rat_from_double(double d) { return Rat(d); }  // exact: doubles are binary rationals

namespace {

// Base-10 only; the cpp_int string constructor would read a leading zero
// ("0.25" -> digits "025") as an octal prefix.
boost::multiprecision::cpp_int parse_decimal_int(const std::string& s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  if (i == s.size()) throw Error(Error::Code::ParseError, "bad integer literal: " + s);
  boost::multiprecision::cpp_int v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw Error(Error::Code::ParseError, "bad integer literal: " + s);
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw Error(Error::Code::ParseError, "empty rational literal");
  auto slash = t.find('/');
  if (slash != std::string::npos) {
    boost::multiprecision::cpp_int num = parse_decimal_int(t.substr(0, slash));
    boost::multiprecision::cpp_int den = parse_decimal_int(t.substr(slash + 1));
    if (den == 0) throw Error(Error::Code::ParseError, "zero denominator in " + s);
    return Rat(num, den);
  }
  auto dot = t.find('.');
  if (dot == std::string::npos) return Rat(parse_decimal_int(t));
  std::string digits = t.substr(0, dot) + t.substr(dot + 1);
  const std::size_t frac = t.size() - dot - 1;
  boost::multiprecision::cpp_int num = parse_decimal_int(digits);
  boost::multiprecision::cpp_int den = 1;
  for (std::size_t i = 0; i < frac; ++i) den *= 10;
  return Rat(num, den);
}

double rat_to_double(const Rat& r) { return static_cast<double>(r); }

std::string rat_to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

RatProblem to_rational(const BilinearProblem& p) {
  RatProblem rp;
  rp.N = p.N;
  rp.M = p.M;
  rp.A.assign(p.N, std::vector<Rat>(p.M, 0));
  for (int i = 0; i < p.N; ++i)
    for (int j = 0; j < p.M; ++j) rp.A[i][j] = rat_from_double(p.A(i, j));
  rp.a.resize(p.N);
  for (int i = 0; i < p.N; ++i) rp.a[i] = rat_from_double(p.a[i]);
  rp.b.resize(p.M);
  for (int i = 0; i < p.M; ++i) rp.b[i] = rat_from_double(p.b[i]);
  rp.c = rat_from_double(p.c);
  auto lift = [](const std::vector<AffineConstraint>& in) {
    std::vector<RatConstraint> out;
    out.reserve(in.size());
    for (const auto& f : in) {
      RatConstraint rf;
      rf.sense = f.sense;
      rf.coeffs.reserve(f.coeffs.size());
      for (double v : f.coeffs) rf.coeffs.push_back(rat_from_double(v));
      out.push_back(std::move(rf));
    }
    return out;
  };
  rp.G = lift(p.G);
  rp.K = lift(p.K);
  return rp;
}

BilinearProblem to_double(const RatProblem& p, double bound_C, bool materialize) {
  BilinearProblem dp;
  dp.N = p.N;
  dp.M = p.M;
  dp.A.resize(p.N, p.M);
  for (int i = 0; i < p.N; ++i)
    for (int j = 0; j < p.M; ++j) dp.A(i, j) = rat_to_double(p.A[i][j]);
  dp.a.resize(p.N);
  for (int i = 0; i < p.N; ++i) dp.a[i] = rat_to_double(p.a[i]);
  dp.b.resize(p.M);
  for (int i = 0; i < p.M; ++i) dp.b[i] = rat_to_double(p.b[i]);
  dp.c = rat_to_double(p.c);
  auto drop = [&](const std::vector<RatConstraint>& in, Family fam) {
    std::vector<AffineConstraint> out;
    out.reserve(in.size());
    for (const auto& f : in) {
      AffineConstraint df;
      df.sense = f.sense;
      df.coeffs.reserve(f.coeffs.size());
      for (const Rat& v : f.coeffs) df.coeffs.push_back(rat_to_double(v));
      df.family = classify_family(df.coeffs, p.N, p.M);
      if (df.family == Family::Mixed) df.family = fam;
      out.push_back(std::move(df));
    }
    return out;
  };
  dp.G = drop(p.G, Family::ZOnly);
  dp.K = drop(p.K, Family::YOnly);
  dp.bound_C = bound_C;
  dp.materialize_boxes = materialize;
  return dp;
}

}  // namespace qbo

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "qbo/model.hpp"

namespace qbo {

// Exact arithmetic for the classical oracles. Doubles convert exactly
// (binary rationals); file input additionally accepts "p/q" strings.
using Rat = boost::multiprecision::cpp_rational;

Rat rat_from_double(double d);
Rat rat_from_string(const std::string& s);  // "p/q", integers, plain decimals
double rat_to_double(const Rat& r);
std::string rat_to_string(const Rat& r);

struct RatConstraint {
  std::vector<Rat> coeffs;  // same layout as AffineConstraint
  Sense sense = Sense::NonNeg;
};

struct RatProblem {
  int N = 0;
  int M = 0;
  std::vector<std::vector<Rat>> A;  // N x M
  std::vector<Rat> a, b;
  Rat c = 0;
  std::vector<RatConstraint> G, K;
};

// Exact lift of a double-precision problem (used when no rational source
// representation exists).
RatProblem to_rational(const BilinearProblem& p);

// Rounding in the other direction, for solver input.
BilinearProblem to_double(const RatProblem& p, double bound_C = 1.0, bool materialize = true);

}  // namespace qbo

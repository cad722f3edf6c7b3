#pragma once

#include <cstdint>

#include "qbo/rational.hpp"

namespace qbo {

struct OracleResult {
  Rat value = 0;
  std::vector<Rat> z, y;  // an attaining vertex pair
};

// Exact classical optimum by vertex enumeration. Each side's polytope must
// decompose into boxes and disjoint simplex groups (the shapes the front-ends
// emit); anything else raises UnsupportedStructure. The smaller side is
// enumerated, the other side answers with an exact best response.
OracleResult classical_value(const RatProblem& p, std::uint64_t cap = default_enum_cap());

// Convenience wrapper over the exact lift of a double-precision problem.
double classical_value(const BilinearProblem& p, std::uint64_t cap = default_enum_cap());

}  // namespace qbo

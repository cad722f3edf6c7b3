#pragma once

#include <cstdint>
#include <vector>

#include "qbo/builder.hpp"
#include "qbo/model.hpp"
#include "qbo/rational.hpp"
#include "qbo/solve.hpp"

namespace qbo {

// Classical channel W(y|x) used to send k message bits with one channel use.
struct Channel {
  int X = 0, Y = 0, k = 1;
  std::vector<std::vector<Rat>> W;  // Y x X, columns sum to 1

  void check() const;  // invariants; throws ValidationFailed
};

// z_(i,x) at symbol 1 + i*X + x (encoder), y_(y,j) at N + 1 + y*2^k + j
// (decoder); objective (1/2^k) delta_{i=j} W(y|x); per-i and per-y simplex
// constraints plus boxes; bound_C = 1.
BilinearProblem channel_to_problem(const Channel& c);

// Exact optimum over deterministic encoder/decoder pairs. Encoders are
// enumerated (|X|^{2^k} capped), the decoder best-responds per output.
Rat channel_classical_value(const Channel& c, std::uint64_t cap = default_enum_cap());

Built build_channel(const Channel& c, HierarchyKind kind, int level);

SolveResult channel_sdp_value(const Channel& c, HierarchyKind kind, int level,
                              const SolveOptions& opts = {});

// The 4-input channel whose outputs are the two-element subsets of the
// inputs, each containing subset equally likely: W(y|x) = 1/3 when x is in y.
Channel subset_channel();

Channel identity_channel(int n, int k);

// Output independent of input: the decoder can only guess.
Channel constant_channel(int X, int k);

}  // namespace qbo

#pragma once

#include <cstdint>
#include <vector>

#include "qbo/instance.hpp"
#include "qbo/rational.hpp"
#include "qbo/solve.hpp"

namespace qbo {

// Seeded extractor {f_s}: 2^d functions from n-bit strings to m-bit strings,
// fed by a source of min-entropy k.
struct Extractor {
  int n = 0, d = 0, m = 0;
  std::vector<std::vector<std::uint32_t>> table;  // [2^d][2^n], values < 2^m
  double k = 0.0;

  void check() const;  // invariants; throws ValidationFailed
};

enum class ExtractorVariant { Full, Simplified };

// First-level moment relaxation of the extractor error, matrix indexed by
// {empty} + source letters (i) + test letters (s,j). Both variants share the
// PSD block, entrywise nonnegativity, the per-column source-sum equalities,
// the min-entropy rows and the test-function rows; Full adds the three
// pairwise product families (source x source, test x test, source x test).
SDPInstance extractor_to_sdp1(const Extractor& e, ExtractorVariant variant);

SolveResult extractor_sdp_err(const Extractor& e, ExtractorVariant variant,
                              const SolveOptions& opts = {});

// Exact maximum of the output-vs-uniform total variation over flat sources on
// 2^k points. k must be a nonnegative integer with 2^k <= 2^n
// (NonIntegralSupport) and C(2^n, 2^k) within the cap (EnumerationTooLarge).
Rat extractor_classical_err(const Extractor& e, int k,
                            std::uint64_t cap = default_enum_cap());

struct ExtractorBoundReport {
  double sdp = 0.0;        // Simplified first-level value at k
  Rat err_k = 0;           // exact classical error at k
  Rat err_km1 = 0;         // exact classical error at k-1
  double bound_sqrt = 0.0; // sqrt(2) sqrt(2^m) sqrt(err_k)
  double bound_groth = 0.0;// 6 K_G 2^{n-k} err_{k-1}
  double slack_sqrt = 0.0, slack_groth = 0.0;
  bool ok = false;
};

// Grothendieck constant upper bound used in the second inequality; any valid
// upper bound keeps the inequality direction.
inline constexpr double kGrothendieck = 1.783;

// Solves the Simplified SDP at integer k >= 1 and checks it against both
// classical-error bounds.
ExtractorBoundReport extractor_bound_check(const Extractor& e, int k,
                                           const SolveOptions& opts = {});

// n=4, d=1, m=1 fixture: f0 = parity of the low two bits, f1 = parity of the
// high two bits.
Extractor parity_extractor(double k = 1.0);

// Single balanced function (low m bits of the input); Err(k=n) = 0.
Extractor truncation_extractor(int n, int m, double k);

// Single constant function, m = 1; Err = 1/2 at every k.
Extractor constant_extractor(int n, double k);

}  // namespace qbo

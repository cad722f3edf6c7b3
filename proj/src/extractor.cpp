#include "qbo/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qbo/error.hpp"
#include "qbo/words.hpp"

namespace qbo {

void Extractor::check() const {
  if (n < 1 || n > 20 || d < 0 || d > 10 || m < 1 || m > 10)
    throw Error(Error::Code::ValidationFailed, "extractor size out of range");
  const std::size_t seeds = std::size_t{1} << d;
  const std::size_t inputs = std::size_t{1} << n;
  if (table.size() != seeds)
    throw Error(Error::Code::DimensionMismatch, "table rows != 2^d");
  for (const auto& row : table) {
    if (row.size() != inputs)
      throw Error(Error::Code::DimensionMismatch, "table cols != 2^n");
    for (std::uint32_t v : row)
      if (v >= (std::uint32_t{1} << m))
        throw Error(Error::Code::ValidationFailed, "table value >= 2^m");
  }
  if (k < 0.0 || k > static_cast<double>(n))
    throw Error(Error::Code::ValidationFailed, "min-entropy outside [0, n]");
}

namespace {

inline std::uint32_t tri(std::uint32_t i, std::uint32_t j) {
  if (i < j) std::swap(i, j);
  return i * (i + 1) / 2 + j;
}

}  // namespace

SDPInstance extractor_to_sdp1(const Extractor& e, ExtractorVariant variant) {
  e.check();
  const std::uint32_t S = std::uint32_t{1} << e.n;           // source letters (i)
  const std::uint32_t T = std::uint32_t{1} << (e.d + e.m);   // test letters (s,j)
  const std::uint32_t D = 1 + S + T;
  if (D > default_word_cap())
    throw Error(Error::Code::CapExceeded, "extractor matrix exceeds the cap");
  const double cap = std::exp2(-e.k);  // source entries bounded by 2^-k

  SDPInstance inst;
  inst.var_count = D * (D + 1) / 2;
  auto var = [&](std::uint32_t u, std::uint32_t v) { return tri(u, v); };
  const std::uint32_t kEmpty = 0;
  auto src = [&](std::uint32_t i) { return 1 + i; };
  auto tst = [&](std::uint32_t t) { return 1 + S + t; };

  PSDBlock moment;
  moment.size = static_cast<int>(D);
  moment.label = "moment";
  for (std::uint32_t r = 0; r < D; ++r)
    for (std::uint32_t c = r; c < D; ++c)
      moment.lin.push_back({static_cast<int>(r), static_cast<int>(c), var(r, c), 1.0});
  inst.blocks.push_back(std::move(moment));

  auto row = [&](std::string label, double cst,
                 std::initializer_list<std::pair<std::uint32_t, double>> terms) {
    PSDBlock b;
    b.size = 1;
    b.label = std::move(label);
    std::map<std::uint32_t, double> acc;
    for (const auto& [v, co] : terms) acc[v] += co;
    for (const auto& [v, co] : acc)
      if (co != 0.0) b.lin.push_back({0, 0, v, co});
    if (cst != 0.0) b.cst.push_back({0, 0, cst});
    inst.blocks.push_back(std::move(b));
  };

  for (std::uint32_t u = 0; u < D; ++u)
    for (std::uint32_t v = u; v < D; ++v)
      row("nonneg", 0.0, {{var(u, v), 1.0}});

  // 2^{-k} M(empty, w) >= M((i), w) for every letter i and word w.
  for (std::uint32_t i = 0; i < S; ++i)
    for (std::uint32_t w = 0; w < D; ++w)
      row("minent", 0.0, {{var(kEmpty, w), cap}, {var(src(i), w), -1.0}});

  // M(empty, w) >= M((s,j), w): test functions lie below the identity.
  for (std::uint32_t t = 0; t < T; ++t)
    for (std::uint32_t w = 0; w < D; ++w)
      row("test", 0.0, {{var(kEmpty, w), 1.0}, {var(tst(t), w), -1.0}});

  if (variant == ExtractorVariant::Full) {
    // Expanded products of the box slacks, pinned at the scalar level:
    // (2^-k - z_i)(2^-k - z_i'), (1 - y)(1 - y'), (2^-k - z_i)(1 - y).
    for (std::uint32_t i = 0; i < S; ++i)
      for (std::uint32_t j = i; j < S; ++j)
        row("pair:zz", cap * cap,
            {{var(src(i), src(j)), 1.0},
             {var(kEmpty, src(i)), -cap},
             {var(kEmpty, src(j)), -cap}});
    for (std::uint32_t s = 0; s < T; ++s)
      for (std::uint32_t t = s; t < T; ++t)
        row("pair:yy", 1.0,
            {{var(tst(s), tst(t)), 1.0},
             {var(kEmpty, tst(s)), -1.0},
             {var(kEmpty, tst(t)), -1.0}});
    for (std::uint32_t i = 0; i < S; ++i)
      for (std::uint32_t t = 0; t < T; ++t)
        row("pair:zy", cap,
            {{var(src(i), tst(t)), 1.0},
             {var(kEmpty, tst(t)), -cap},
             {var(kEmpty, src(i)), -1.0}});
  }

  EqualityCollector eqs;
  eqs.add({{var(kEmpty, kEmpty), 1.0}}, 1.0);
  // Column consistency: the source letters sum to the empty word.
  for (std::uint32_t w = 0; w < D; ++w) {
    std::map<std::uint32_t, double> terms;
    terms[var(kEmpty, w)] += 1.0;
    for (std::uint32_t i = 0; i < S; ++i) terms[var(src(i), w)] -= 1.0;
    eqs.add(std::move(terms), 0.0);
  }
  inst.equalities = eqs.take();

  const double shift = std::exp2(-e.m);
  const double seed_avg = std::exp2(-e.d);
  std::map<std::uint32_t, double> obj;
  for (std::uint32_t s = 0; s < (std::uint32_t{1} << e.d); ++s)
    for (std::uint32_t i = 0; i < S; ++i)
      for (std::uint32_t j = 0; j < (std::uint32_t{1} << e.m); ++j) {
        const double coef =
            seed_avg * ((e.table[s][i] == j ? 1.0 : 0.0) - shift);
        obj[var(src(i), tst((s << e.m) | j))] += coef;
      }
  for (const auto& [v, co] : obj)
    if (co != 0.0) inst.objective.push_back({v, co});

  inst.meta.kind = "new";
  inst.meta.level = 1;
  inst.meta.info["frontend"] = "extractor";
  inst.meta.info["variant"] =
      variant == ExtractorVariant::Full ? "full" : "simplified";
  inst.check();
  return inst;
}

SolveResult extractor_sdp_err(const Extractor& e, ExtractorVariant variant,
                              const SolveOptions& opts) {
  return solve(extractor_to_sdp1(e, variant), opts);
}

Rat extractor_classical_err(const Extractor& e, int k, std::uint64_t cap) {
  e.check();
  if (k < 0 || k > e.n)
    throw Error(Error::Code::NonIntegralSupport, "flat sources need integer k in [0, n]");
  const std::uint64_t inputs = std::uint64_t{1} << e.n;
  const std::uint64_t support = std::uint64_t{1} << k;

  // C(inputs, support) against the cap, saturating.
  long double count = 1.0L;
  for (std::uint64_t i = 0; i < support; ++i)
    count = count * static_cast<long double>(inputs - i) / static_cast<long double>(i + 1);
  if (count > static_cast<long double>(cap))
    throw Error(Error::Code::EnumerationTooLarge, "too many flat sources");

  const std::uint32_t seeds = std::uint32_t{1} << e.d;
  const std::uint32_t outs = std::uint32_t{1} << e.m;
  const Rat uniform = Rat(1, static_cast<long>(outs));
  const Rat norm = Rat(1, 2) * Rat(1, static_cast<long>(seeds));

  std::vector<std::uint32_t> pick(static_cast<std::size_t>(support));
  for (std::uint64_t i = 0; i < support; ++i) pick[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint32_t> hist(static_cast<std::size_t>(seeds * outs));

  Rat best = 0;
  bool more = true;
  while (more) {
    std::fill(hist.begin(), hist.end(), 0u);
    for (std::uint32_t i : pick)
      for (std::uint32_t s = 0; s < seeds; ++s) ++hist[s * outs + e.table[s][i]];
    Rat err = 0;
    for (std::uint32_t s = 0; s < seeds; ++s)
      for (std::uint32_t j = 0; j < outs; ++j) {
        Rat dev = Rat(hist[s * outs + j], static_cast<unsigned long>(support)) - uniform;
        if (dev < 0) dev = -dev;
        err += dev;
      }
    err *= norm;
    if (err > best) best = err;

    // next combination in lexicographic order
    more = false;
    for (std::size_t p = pick.size(); p-- > 0;) {
      if (pick[p] < inputs - (pick.size() - p)) {
        ++pick[p];
        for (std::size_t q = p + 1; q < pick.size(); ++q) pick[q] = pick[q - 1] + 1;
        more = true;
        break;
      }
    }
  }
  return best;
}

ExtractorBoundReport extractor_bound_check(const Extractor& e, int k,
                                           const SolveOptions& opts) {
  if (k < 1) throw Error(Error::Code::ValidationFailed, "bound check needs k >= 1");
  Extractor at_k = e;
  at_k.k = static_cast<double>(k);
  ExtractorBoundReport rep;
  rep.sdp = extractor_sdp_err(at_k, ExtractorVariant::Simplified, opts).value;
  rep.err_k = extractor_classical_err(e, k);
  rep.err_km1 = extractor_classical_err(e, k - 1);
  rep.bound_sqrt =
      std::sqrt(2.0) * std::sqrt(std::exp2(e.m)) * std::sqrt(rat_to_double(rep.err_k));
  rep.bound_groth =
      6.0 * kGrothendieck * std::exp2(e.n - k) * rat_to_double(rep.err_km1);
  rep.slack_sqrt = rep.bound_sqrt - rep.sdp;
  rep.slack_groth = rep.bound_groth - rep.sdp;
  rep.ok = rep.slack_sqrt >= -1e-6 && rep.slack_groth >= -1e-6;
  return rep;
}

Extractor parity_extractor(double k) {
  Extractor e;
  e.n = 4;
  e.d = 1;
  e.m = 1;
  e.k = k;
  e.table.assign(2, std::vector<std::uint32_t>(16, 0));
  for (std::uint32_t i = 0; i < 16; ++i) {
    e.table[0][i] = (i & 1u) ^ ((i >> 1) & 1u);
    e.table[1][i] = ((i >> 2) & 1u) ^ ((i >> 3) & 1u);
  }
  return e;
}

Extractor truncation_extractor(int n, int m, double k) {
  Extractor e;
  e.n = n;
  e.d = 0;
  e.m = m;
  e.k = k;
  const std::uint32_t inputs = std::uint32_t{1} << n;
  e.table.assign(1, std::vector<std::uint32_t>(inputs, 0));
  for (std::uint32_t i = 0; i < inputs; ++i)
    e.table[0][i] = i & ((std::uint32_t{1} << m) - 1);
  return e;
}

Extractor constant_extractor(int n, double k) {
  Extractor e;
  e.n = n;
  e.d = 0;
  e.m = 1;
  e.k = k;
  e.table.assign(1, std::vector<std::uint32_t>(std::size_t{1} << n, 0));
  return e;
}

}  // namespace qbo

#include "qbo/channel.hpp"

#include <cmath>

#include "qbo/error.hpp"
#include "qbo/oracle.hpp"

namespace qbo {

void Channel::check() const {
  if (X < 1 || Y < 1) throw Error(Error::Code::ValidationFailed, "empty channel");
  if (k < 0 || k > 20) throw Error(Error::Code::ValidationFailed, "message bits out of range");
  if (W.size() != static_cast<std::size_t>(Y))
    throw Error(Error::Code::DimensionMismatch, "W rows != Y");
  for (const auto& row : W) {
    if (row.size() != static_cast<std::size_t>(X))
      throw Error(Error::Code::DimensionMismatch, "W cols != X");
    for (const Rat& v : row)
      if (v < 0) throw Error(Error::Code::ValidationFailed, "W negative");
  }
  for (int x = 0; x < X; ++x) {
    Rat sum = 0;
    for (int y = 0; y < Y; ++y) sum += W[y][x];
    if (std::abs(rat_to_double(sum) - 1.0) > 1e-12)
      throw Error(Error::Code::ValidationFailed, "W column does not sum to 1");
  }
}

namespace {

RatProblem channel_to_rational(const Channel& c) {
  c.check();
  const int msgs = 1 << c.k;
  RatProblem p;
  p.N = msgs * c.X;
  p.M = c.Y * msgs;
  p.A.assign(p.N, std::vector<Rat>(p.M, 0));
  p.a.assign(p.N, 0);
  p.b.assign(p.M, 0);
  // Success = (1/msgs) sum_{i,x,y} W(y|x) z_(i,x) y_(y,i).
  for (int i = 0; i < msgs; ++i)
    for (int x = 0; x < c.X; ++x)
      for (int y = 0; y < c.Y; ++y)
        if (c.W[y][x] != 0)
          p.A[i * c.X + x][y * msgs + i] = c.W[y][x] / msgs;

  const int total = 1 + p.N + p.M;
  auto box = [&](std::vector<RatConstraint>& dst, int var) {
    RatConstraint f;
    f.coeffs.assign(total, 0);
    f.coeffs[static_cast<std::size_t>(var)] = 1;
    f.sense = Sense::NonNeg;
    dst.push_back(std::move(f));
  };
  auto simplex = [&](std::vector<RatConstraint>& dst, int first, int count) {
    RatConstraint f;
    f.coeffs.assign(total, 0);
    f.coeffs[0] = -1;
    for (int i = 0; i < count; ++i) f.coeffs[static_cast<std::size_t>(first + i)] = 1;
    f.sense = Sense::Zero;
    dst.push_back(std::move(f));
  };
  for (int i = 0; i < msgs; ++i) {
    simplex(p.G, 1 + i * c.X, c.X);
    for (int x = 0; x < c.X; ++x) box(p.G, 1 + i * c.X + x);
  }
  for (int y = 0; y < c.Y; ++y) {
    simplex(p.K, 1 + p.N + y * msgs, msgs);
    for (int i = 0; i < msgs; ++i) box(p.K, 1 + p.N + y * msgs + i);
  }
  return p;
}

}  // namespace

BilinearProblem channel_to_problem(const Channel& c) {
  return to_double(channel_to_rational(c), 1.0, true);
}

Rat channel_classical_value(const Channel& c, std::uint64_t cap) {
  return classical_value(channel_to_rational(c), cap).value;
}

Built build_channel(const Channel& c, HierarchyKind kind, int level) {
  const BilinearProblem p = channel_to_problem(c);
  if (kind == HierarchyKind::New) return build_new(p, level);
  if (kind != HierarchyKind::NPA)
    throw Error(Error::Code::ValidationFailed, "channels build npa or new only");
  return build_npa(p, level);
}

SolveResult channel_sdp_value(const Channel& c, HierarchyKind kind, int level,
                              const SolveOptions& opts) {
  SolveResult r = solve(build_channel(c, kind, level).instance, opts);
  // The pair hierarchy's first level never exceeds certainty on a valid
  // channel; escaping it means the build or the solve went wrong.
  if (kind == HierarchyKind::New && level == 1 && r.status == SolveStatus::Optimal &&
      r.value > 1.0 + 1e-6)
    throw Error(Error::Code::BackendFailure, "first-level value escaped the unit bound");
  return r;
}

Channel subset_channel() {
  Channel c;
  c.X = 4;
  c.Y = 6;
  c.k = 1;
  c.W.assign(6, std::vector<Rat>(4, 0));
  int y = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      c.W[y][u] = Rat(1, 3);
      c.W[y][v] = Rat(1, 3);
      ++y;
    }
  return c;
}

Channel identity_channel(int n, int k) {
  Channel c;
  c.X = c.Y = n;
  c.k = k;
  c.W.assign(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) c.W[i][i] = 1;
  return c;
}

Channel constant_channel(int X, int k) {
  Channel c;
  c.X = X;
  c.Y = 1;
  c.k = k;
  c.W.assign(1, std::vector<Rat>(static_cast<std::size_t>(X), 1));
  return c;
}

}  // namespace qbo

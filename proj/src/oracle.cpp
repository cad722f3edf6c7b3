#include "qbo/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "qbo/error.hpp"

namespace qbo {

namespace {

struct Group {
  std::vector<int> vars;
  std::vector<Rat> coef;  // positive after sign normalization
  Rat rhs;
};

// One side's polytope decomposed into boxes and disjoint equality groups.
struct Side {
  int n = 0;
  std::vector<Rat> lo, hi;
  std::vector<bool> has_lo, has_hi;
  std::vector<int> group_of;  // -1 = box only
  std::vector<Group> groups;
};

Side analyze(const std::vector<RatConstraint>& rows, int offset, int n) {
  Side s;
  s.n = n;
  s.lo.assign(n, 0);
  s.hi.assign(n, 0);
  s.has_lo.assign(n, false);
  s.has_hi.assign(n, false);
  s.group_of.assign(n, -1);

  auto raise_lo = [&](int i, const Rat& v) {
    if (!s.has_lo[i] || v > s.lo[i]) {
      s.lo[i] = v;
      s.has_lo[i] = true;
    }
  };
  auto drop_hi = [&](int i, const Rat& v) {
    if (!s.has_hi[i] || v < s.hi[i]) {
      s.hi[i] = v;
      s.has_hi[i] = true;
    }
  };

  for (const RatConstraint& row : rows) {
    const Rat& c0 = row.coeffs.at(0);
    std::vector<std::pair<int, Rat>> sup;
    for (int i = 0; i < n; ++i) {
      const Rat& v = row.coeffs.at(static_cast<std::size_t>(offset + i));
      if (v != 0) sup.emplace_back(i, v);
    }
    if (row.sense == Sense::NonNeg) {
      if (sup.empty()) {
        if (c0 < 0)
          throw Error(Error::Code::ValidationFailed, "infeasible constant row");
        continue;
      }
      if (sup.size() > 1)
        throw Error(Error::Code::UnsupportedStructure,
                    "oracle handles single-variable inequalities only");
      const auto& [i, a] = sup[0];
      const Rat bound = -c0 / a;
      if (a > 0)
        raise_lo(i, bound);
      else
        drop_hi(i, bound);
    } else {
      if (sup.empty()) {
        if (c0 != 0)
          throw Error(Error::Code::ValidationFailed, "infeasible constant row");
        continue;
      }
      if (sup.size() == 1) {
        const auto& [i, a] = sup[0];
        const Rat v = -c0 / a;
        raise_lo(i, v);
        drop_hi(i, v);
        continue;
      }
      bool allpos = true, allneg = true;
      for (const auto& [i, a] : sup) {
        allpos = allpos && a > 0;
        allneg = allneg && a < 0;
      }
      if (!allpos && !allneg)
        throw Error(Error::Code::UnsupportedStructure,
                    "oracle handles uniform-sign equality groups only");
      Group g;
      for (const auto& [i, a] : sup) {
        g.vars.push_back(i);
        g.coef.push_back(allpos ? a : Rat(-a));
      }
      g.rhs = allpos ? Rat(-c0) : Rat(c0);
      for (int i : g.vars) {
        if (s.group_of[i] != -1)
          throw Error(Error::Code::UnsupportedStructure,
                      "oracle requires disjoint equality groups");
        s.group_of[i] = static_cast<int>(s.groups.size());
      }
      s.groups.push_back(std::move(g));
    }
  }

  for (int i = 0; i < n; ++i)
    if (!s.has_lo[i])
      throw Error(Error::Code::UnsupportedStructure,
                  "variable without lower bound");
  // Group members inherit the cap implied by the equality and the other
  // members' lower bounds.
  for (const Group& g : s.groups) {
    Rat lo_sum = 0;
    for (std::size_t j = 0; j < g.vars.size(); ++j)
      lo_sum += g.coef[j] * s.lo[static_cast<std::size_t>(g.vars[j])];
    for (std::size_t j = 0; j < g.vars.size(); ++j) {
      const int i = g.vars[j];
      const Rat implied =
          (g.rhs - (lo_sum - g.coef[j] * s.lo[static_cast<std::size_t>(i)])) / g.coef[j];
      drop_hi(i, implied);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!s.has_hi[i])
      throw Error(Error::Code::UnsupportedStructure,
                  "variable without upper bound");
    if (s.lo[i] > s.hi[i])
      throw Error(Error::Code::ValidationFailed, "empty box");
  }
  return s;
}

using Vertex = std::vector<Rat>;

// Vertices of one group's slice {x in box : <coef,x> = rhs}: all but at most
// one member sit at a bound. The common simplex shape (lo = 0, caps slack)
// short-circuits to the unit assignments.
std::vector<Vertex> group_vertices(const Side& s, const Group& g) {
  const std::size_t m = g.vars.size();
  bool simplex = g.rhs > 0;
  for (std::size_t j = 0; simplex && j < m; ++j) {
    const int i = g.vars[j];
    simplex = s.lo[i] == 0 && s.hi[i] * g.coef[j] >= g.rhs;
  }
  if (simplex) {
    std::vector<Vertex> out;
    for (std::size_t j = 0; j < m; ++j) {
      Vertex v(m, Rat(0));
      v[j] = g.rhs / g.coef[j];
      out.push_back(std::move(v));
    }
    return out;
  }

  std::set<Vertex> seen;
  Vertex cur(m);
  // frac = index allowed off its bounds, m = none.
  for (std::size_t frac = 0; frac <= m; ++frac) {
    std::function<void(std::size_t, Rat)> rec = [&](std::size_t p, Rat acc) {
      if (p == m) {
        if (frac == m) {
          if (acc == g.rhs) seen.insert(cur);
        } else {
          const int i = g.vars[frac];
          const Rat v = (g.rhs - acc) / g.coef[frac];
          if (v >= s.lo[i] && v <= s.hi[i]) {
            cur[frac] = v;
            seen.insert(cur);
          }
        }
        return;
      }
      if (p == frac) {
        rec(p + 1, acc);
        return;
      }
      const int i = g.vars[p];
      cur[p] = s.lo[i];
      rec(p + 1, acc + g.coef[p] * s.lo[i]);
      if (s.hi[i] != s.lo[i]) {
        cur[p] = s.hi[i];
        rec(p + 1, acc + g.coef[p] * s.hi[i]);
      }
    };
    rec(0, Rat(0));
  }
  return {seen.begin(), seen.end()};
}

// Pre-enumeration size estimate, saturating against the cap.
std::uint64_t estimate(const Side& s, std::uint64_t cap) {
  std::uint64_t est = 1;
  auto mul = [&](std::uint64_t f) {
    if (f == 0) f = 1;
    if (est > cap / f + 1) est = cap + 1;
    else est *= f;
  };
  for (int i = 0; i < s.n; ++i)
    if (s.group_of[i] == -1 && s.lo[i] != s.hi[i]) mul(2);
  for (const Group& g : s.groups) {
    const std::size_t m = g.vars.size();
    bool simplex = g.rhs > 0;
    for (std::size_t j = 0; simplex && j < m; ++j)
      simplex = s.lo[g.vars[j]] == 0 && s.hi[g.vars[j]] * g.coef[j] >= g.rhs;
    if (simplex) {
      mul(m);
    } else if (m >= 60) {
      est = cap + 1;
    } else {
      mul((static_cast<std::uint64_t>(m) + 2) << (m - 1));
    }
  }
  return est;
}

// Exact maximum of <d, x> over the side's polytope; equality groups fill by
// a ratio-greedy exchange (optimal since the coefficient mass is fixed).
Rat best_response(const Side& s, const std::vector<Rat>& d, std::vector<Rat>& x) {
  x.assign(static_cast<std::size_t>(s.n), Rat(0));
  Rat total = 0;
  for (int i = 0; i < s.n; ++i) {
    if (s.group_of[i] != -1) continue;
    x[i] = d[i] > 0 ? s.hi[i] : s.lo[i];
    total += d[i] * x[i];
  }
  for (const Group& g : s.groups) {
    const std::size_t m = g.vars.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      // d_a/coef_a > d_b/coef_b, cross-multiplied (coefs positive)
      return d[g.vars[a]] * g.coef[b] > d[g.vars[b]] * g.coef[a];
    });
    Rat remaining = g.rhs;
    for (std::size_t j = 0; j < m; ++j) {
      x[g.vars[j]] = s.lo[g.vars[j]];
      remaining -= g.coef[j] * s.lo[g.vars[j]];
    }
    if (remaining < 0)
      throw Error(Error::Code::ValidationFailed, "group below its floor");
    for (std::size_t jj : order) {
      const int i = g.vars[jj];
      const Rat room = g.coef[jj] * (s.hi[i] - s.lo[i]);
      const Rat take = remaining < room ? remaining : room;
      x[i] += take / g.coef[jj];
      remaining -= take;
      if (remaining == 0) break;
    }
    if (remaining != 0)
      throw Error(Error::Code::ValidationFailed, "group cannot reach its sum");
    for (std::size_t j = 0; j < m; ++j) total += d[g.vars[j]] * x[g.vars[j]];
  }
  return total;
}

}  // namespace

OracleResult classical_value(const RatProblem& p, std::uint64_t cap) {
  if (p.N < 0 || p.M < 0)
    throw Error(Error::Code::ValidationFailed, "negative dimension");
  const Side sz = analyze(p.G, 1, p.N);
  const Side sy = analyze(p.K, 1 + p.N, p.M);
  const std::uint64_t ez = estimate(sz, cap), ey = estimate(sy, cap);
  if (ez > cap && ey > cap)
    throw Error(Error::Code::EnumerationTooLarge,
                "both sides exceed the enumeration cap");
  const bool enum_z = ez <= ey;
  const Side& outer = enum_z ? sz : sy;
  const Side& inner = enum_z ? sy : sz;
  const std::vector<Rat>& lin_outer = enum_z ? p.a : p.b;
  const std::vector<Rat>& lin_inner = enum_z ? p.b : p.a;
  auto bil = [&](int o, int i) -> const Rat& {
    return enum_z ? p.A[static_cast<std::size_t>(o)][static_cast<std::size_t>(i)]
                  : p.A[static_cast<std::size_t>(i)][static_cast<std::size_t>(o)];
  };

  // Pre-compute group vertex lists once.
  std::vector<std::vector<Vertex>> gverts;
  for (const Group& g : outer.groups) gverts.push_back(group_vertices(outer, g));

  std::vector<int> free_vars;
  for (int i = 0; i < outer.n; ++i)
    if (outer.group_of[i] == -1) free_vars.push_back(i);

  bool found = false;
  OracleResult best;
  std::vector<Rat> xo(static_cast<std::size_t>(outer.n), Rat(0));
  std::vector<Rat> d(static_cast<std::size_t>(inner.n));
  std::vector<Rat> xi;

  auto evaluate_leaf = [&]() {
    for (int j = 0; j < inner.n; ++j) {
      Rat acc = lin_inner.empty() ? Rat(0) : lin_inner[static_cast<std::size_t>(j)];
      for (int i = 0; i < outer.n; ++i)
        if (xo[static_cast<std::size_t>(i)] != 0)
          acc += xo[static_cast<std::size_t>(i)] * bil(i, j);
      d[static_cast<std::size_t>(j)] = acc;
    }
    Rat val = best_response(inner, d, xi) + p.c;
    for (int i = 0; i < outer.n; ++i)
      if (!lin_outer.empty())
        val += lin_outer[static_cast<std::size_t>(i)] * xo[static_cast<std::size_t>(i)];
    if (!found || val > best.value) {
      found = true;
      best.value = val;
      if (enum_z) {
        best.z = xo;
        best.y = xi;
      } else {
        best.z = xi;
        best.y = xo;
      }
    }
  };

  std::function<void(std::size_t)> walk_groups = [&](std::size_t gi) {
    if (gi == outer.groups.size()) {
      evaluate_leaf();
      return;
    }
    const Group& g = outer.groups[gi];
    for (const Vertex& v : gverts[gi]) {
      for (std::size_t j = 0; j < g.vars.size(); ++j)
        xo[static_cast<std::size_t>(g.vars[j])] = v[j];
      walk_groups(gi + 1);
    }
  };
  std::function<void(std::size_t)> walk_free = [&](std::size_t fi) {
    if (fi == free_vars.size()) {
      walk_groups(0);
      return;
    }
    const int i = free_vars[fi];
    xo[static_cast<std::size_t>(i)] = outer.lo[i];
    walk_free(fi + 1);
    if (outer.hi[i] != outer.lo[i]) {
      xo[static_cast<std::size_t>(i)] = outer.hi[i];
      walk_free(fi + 1);
    }
  };
  walk_free(0);

  if (!found)
    throw Error(Error::Code::ValidationFailed, "no feasible vertex found");
  return best;
}

double classical_value(const BilinearProblem& p, std::uint64_t cap) {
  return rat_to_double(classical_value(to_rational(p), cap).value);
}

}  // namespace qbo

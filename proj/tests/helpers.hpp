#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "qbo/builder.hpp"
#include "qbo/instance.hpp"
#include "qbo/model.hpp"
#include "qbo/rational.hpp"

namespace qbo::testing {

// Uniform in [-1, 1) from the raw engine stream; distribution classes are
// implementation-defined, which would break frozen expectations.
inline double runif(std::mt19937& rng) {
  const double u = (rng() >> 5) * (1.0 / 134217728.0);  // [0, 1) at 27 bits
  return 2.0 * u - 1.0;
}

inline Eigen::VectorXd to_eigen(const std::vector<Rat>& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = rat_to_double(v[i]);
  return out;
}

// Scalar value of a word under the assignment (z, y).
inline double word_value(const Word& w, const Eigen::VectorXd& z,
                         const Eigen::VectorXd& y, int N) {
  double v = 1.0;
  for (Symbol s : w)
    v *= (static_cast<int>(s) <= N) ? z[s - 1] : y[s - 1 - N];
  return v;
}

// Rank-one moment vector of a scalar point. Valid for any point on pair
// layouts; NPA layouts with active rewrite rules additionally need the
// point to be deterministic (0/1 per question) so collapse and annihilation
// hold scalar-side.
inline Eigen::VectorXd embed_point(const Built& built, int N,
                                   const Eigen::VectorXd& z,
                                   const Eigen::VectorXd& y) {
  const MomentLayout& lay = built.layout;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(built.instance.var_count);
  if (lay.kind == HierarchyKind::New) {
    const auto& rw = lay.row_words;
    for (std::size_t j = 0; j < rw.size(); ++j)
      for (std::size_t i = 0; i <= j; ++i)
        x[lay.entry_index(rw[i], rw[j])] =
            word_value(rw[i], z, y, N) * word_value(rw[j], z, y, N);
  } else {
    for (std::uint32_t v = 0; v < built.instance.var_count; ++v)
      x[v] = word_value(lay.word_of[v], z, y, N);
  }
  return x;
}

inline double min_block_eig(const SDPInstance& inst, const Eigen::VectorXd& x) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : inst.blocks) {
    const Eigen::MatrixXd S = block_value(b, x);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

inline AffineConstraint lower_box(int N, int M, int var) {  // var in symbol space
  AffineConstraint f;
  f.coeffs.assign(1 + N + M, 0.0);
  f.coeffs[var] = 1.0;
  f.sense = Sense::NonNeg;
  f.family = classify_family(f.coeffs, N, M);
  return f;
}

inline AffineConstraint upper_box(int N, int M, int var) {
  AffineConstraint f;
  f.coeffs.assign(1 + N + M, 0.0);
  f.coeffs[0] = 1.0;
  f.coeffs[var] = -1.0;
  f.sense = Sense::NonNeg;
  f.family = classify_family(f.coeffs, N, M);
  return f;
}

inline AffineConstraint simplex_row(int N, int M, int first, int count) {
  AffineConstraint f;
  f.coeffs.assign(1 + N + M, 0.0);
  f.coeffs[0] = -1.0;
  for (int t = 0; t < count; ++t) f.coeffs[first + t] = 1.0;
  f.sense = Sense::Zero;
  f.family = classify_family(f.coeffs, N, M);
  return f;
}

// Random box/simplex instance with coefficients on a dyadic grid so the
// rational lift is exact and cheap.
inline BilinearProblem random_problem(std::mt19937& rng, int N, int M,
                                      bool simplex_z, bool simplex_y) {
  auto grid = [&] { return std::round(runif(rng) * 64.0) / 64.0; };
  BilinearProblem p;
  p.N = N;
  p.M = M;
  p.A.resize(N, M);
  p.a.resize(N);
  p.b.resize(M);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < M; ++j) p.A(i, j) = grid();
  for (int i = 0; i < N; ++i) p.a[i] = grid();
  for (int j = 0; j < M; ++j) p.b[j] = grid();
  p.c = grid();
  for (int i = 0; i < N; ++i) {
    p.G.push_back(lower_box(N, M, 1 + i));
    if (!simplex_z) p.G.push_back(upper_box(N, M, 1 + i));
  }
  if (simplex_z) p.G.push_back(simplex_row(N, M, 1, N));
  for (int j = 0; j < M; ++j) {
    p.K.push_back(lower_box(N, M, 1 + N + j));
    if (!simplex_y) p.K.push_back(upper_box(N, M, 1 + N + j));
  }
  if (simplex_y) p.K.push_back(simplex_row(N, M, 1 + N, M));
  return p;
}

}  // namespace qbo::testing

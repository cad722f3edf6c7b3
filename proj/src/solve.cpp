#include "qbo/solve.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "qbo/error.hpp"

namespace qbo {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::Inaccurate: return "Inaccurate";
    case SolveStatus::TimeOut: return "TimeOut";
  }
  return "?";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kEqWeight = 1e3;   // penalty weight on zero-cone rows
constexpr double kSigma = 1e-6;     // proximal regularization (rho-free)
constexpr double kAlpha = 1.6;      // over-relaxation
constexpr int kCheckEvery = 25;
constexpr int kRhoCooldown = 100;

inline int svec_dim(int k) { return k * (k + 1) / 2; }
inline int svec_index(int r, int c) { return c * (c + 1) / 2 + r; }  // r <= c

Eigen::MatrixXd svec_to_mat(const double* v, int k) {
  Eigen::MatrixXd S(k, k);
  for (int c = 0; c < k; ++c)
    for (int r = 0; r <= c; ++r) {
      double val = v[svec_index(r, c)];
      if (r != c) val /= kSqrt2;
      S(r, c) = val;
      S(c, r) = val;
    }
  return S;
}

void mat_to_svec(const Eigen::MatrixXd& S, double* out) {
  const int k = static_cast<int>(S.rows());
  for (int c = 0; c < k; ++c)
    for (int r = 0; r <= c; ++r)
      out[svec_index(r, c)] = (r == c) ? S(r, c) : kSqrt2 * S(r, c);
}

// Conic row layout: equalities (zero cone), scalar blocks (nonneg cone),
// then svec'd matrix blocks. s = b - Ax must live in the cone.
struct Layout {
  int m_eq = 0;
  int m_nn = 0;
  std::vector<int> nn_block;    // instance block index per nonneg row
  std::vector<int> psd_block;   // instance block index per matrix block
  std::vector<int> psd_size;
  std::vector<int> psd_offset;  // first row of each matrix block
  int rows = 0;
};

Layout make_layout(const SDPInstance& inst) {
  Layout L;
  L.m_eq = static_cast<int>(inst.equalities.size());
  for (std::size_t j = 0; j < inst.blocks.size(); ++j)
    if (inst.blocks[j].size == 1) L.nn_block.push_back(static_cast<int>(j));
  L.m_nn = static_cast<int>(L.nn_block.size());
  int off = L.m_eq + L.m_nn;
  for (std::size_t j = 0; j < inst.blocks.size(); ++j) {
    const int k = inst.blocks[j].size;
    if (k >= 2) {
      L.psd_block.push_back(static_cast<int>(j));
      L.psd_size.push_back(k);
      L.psd_offset.push_back(off);
      off += svec_dim(k);
    }
  }
  L.rows = off;
  return L;
}

struct Conic {
  Layout lay;
  std::vector<Eigen::Triplet<double>> trips;  // original A, duplicates summed
  Eigen::VectorXd b;                          // original rhs
  Eigen::VectorXd f;                          // minimize f'x, f = -c
  int m = 0, n = 0;
};

Conic assemble(const SDPInstance& inst) {
  Conic P;
  P.lay = make_layout(inst);
  P.m = P.lay.rows;
  P.n = static_cast<int>(inst.var_count);
  P.b = Eigen::VectorXd::Zero(P.m);
  P.f = Eigen::VectorXd::Zero(P.n);
  for (const auto& t : inst.objective) P.f[t.var] -= t.coef;
  for (int i = 0; i < P.lay.m_eq; ++i) {
    const EqRow& row = inst.equalities[i];
    for (const auto& t : row.terms)
      P.trips.emplace_back(i, static_cast<int>(t.var), t.coef);
    P.b[i] = row.rhs;
  }
  for (int i = 0; i < P.lay.m_nn; ++i) {
    const PSDBlock& blk = inst.blocks[P.lay.nn_block[i]];
    const int row = P.lay.m_eq + i;
    for (const auto& e : blk.lin)
      P.trips.emplace_back(row, static_cast<int>(e.var), -e.coef);
    for (const auto& e : blk.cst) P.b[row] += e.value;
  }
  for (std::size_t k = 0; k < P.lay.psd_block.size(); ++k) {
    const PSDBlock& blk = inst.blocks[P.lay.psd_block[k]];
    const int off = P.lay.psd_offset[k];
    for (const auto& e : blk.lin) {
      const double fac = (e.r == e.c) ? 1.0 : kSqrt2;
      P.trips.emplace_back(off + svec_index(e.r, e.c),
                           static_cast<int>(e.var), -fac * e.coef);
    }
    for (const auto& e : blk.cst) {
      const double fac = (e.r == e.c) ? 1.0 : kSqrt2;
      P.b[off + svec_index(e.r, e.c)] += fac * e.value;
    }
  }
  return P;
}

// Projects onto the cone in place; scales commute with this projection only
// because row scaling is uniform within each matrix block.
struct Projector {
  const Layout* lay;
  void operator()(Eigen::VectorXd& v) const {
    v.head(lay->m_eq).setZero();
    v.segment(lay->m_eq, lay->m_nn) =
        v.segment(lay->m_eq, lay->m_nn).cwiseMax(0.0);
    for (std::size_t k = 0; k < lay->psd_size.size(); ++k) {
      const int sz = lay->psd_size[k];
      const int off = lay->psd_offset[k];
      Eigen::MatrixXd S = svec_to_mat(v.data() + off, sz);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
      if (es.info() != Eigen::Success)
        throw Error(Error::Code::BackendFailure, "eigendecomposition failed");
      Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
      S.noalias() = es.eigenvectors() * lam.asDiagonal() *
                    es.eigenvectors().transpose();
      mat_to_svec(S, v.data() + off);
    }
  }
};

// Minimum eigenvalue over the cone part of a row vector (recession check).
double cone_violation(const Layout& lay, const Eigen::VectorXd& v) {
  double worst = 0.0;
  for (int i = 0; i < lay.m_eq; ++i) worst = std::max(worst, std::abs(v[i]));
  for (int i = 0; i < lay.m_nn; ++i)
    worst = std::max(worst, std::max(0.0, -v[lay.m_eq + i]));
  for (std::size_t k = 0; k < lay.psd_size.size(); ++k) {
    Eigen::MatrixXd S = svec_to_mat(v.data() + lay.psd_offset[k], lay.psd_size[k]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    worst = std::max(worst, std::max(0.0, -es.eigenvalues().minCoeff()));
  }
  return worst;
}

double linf(const Eigen::VectorXd& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Extracts per-block dual matrices from a conic dual vector.
std::vector<Eigen::MatrixXd> extract_duals(const SDPInstance& inst,
                                           const Layout& lay,
                                           const Eigen::VectorXd& y) {
  std::vector<Eigen::MatrixXd> out(inst.blocks.size());
  for (int i = 0; i < lay.m_nn; ++i) {
    Eigen::MatrixXd Y(1, 1);
    Y(0, 0) = y[lay.m_eq + i];
    out[lay.nn_block[i]] = std::move(Y);
  }
  for (std::size_t k = 0; k < lay.psd_block.size(); ++k)
    out[lay.psd_block[k]] = svec_to_mat(y.data() + lay.psd_offset[k], lay.psd_size[k]);
  return out;
}

// Projects a dual candidate onto the dual cone (free x nonneg x PSD).
void project_dual(const Layout& lay, Eigen::VectorXd& y) {
  for (int i = 0; i < lay.m_nn; ++i)
    y[lay.m_eq + i] = std::max(0.0, y[lay.m_eq + i]);
  for (std::size_t k = 0; k < lay.psd_size.size(); ++k) {
    const int sz = lay.psd_size[k];
    const int off = lay.psd_offset[k];
    Eigen::MatrixXd S = svec_to_mat(y.data() + off, sz);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    S.noalias() = es.eigenvectors() * lam.asDiagonal() *
                  es.eigenvectors().transpose();
    mat_to_svec(S, y.data() + off);
  }
}

}  // namespace

SolveResult solve(const SDPInstance& inst, const SolveOptions& opts) {
  inst.check();
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start).count();
  };

  SolveResult res;
  if (inst.var_count == 0) {
    bool ok = inst.equalities.empty() ||
              std::all_of(inst.equalities.begin(), inst.equalities.end(),
                          [](const EqRow& r) { return r.rhs == 0.0; });
    Eigen::VectorXd zero(0);
    for (const auto& blk : inst.blocks) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_value(blk, zero));
      if (es.eigenvalues().minCoeff() < -1e-12) ok = false;
    }
    res.status = ok ? SolveStatus::Optimal : SolveStatus::Infeasible;
    res.value = ok ? inst.obj_const : 0.0;
    res.x = zero;
    res.message = "constant instance";
    res.wall_s = elapsed();
    return res;
  }

  Conic P = assemble(inst);
  const Layout& lay = P.lay;
  const int m = P.m, n = P.n;

  Eigen::SparseMatrix<double> A0(m, n);
  A0.setFromTriplets(P.trips.begin(), P.trips.end());
  Eigen::SparseMatrix<double> A0T = A0.transpose();

  // Ruiz equilibration, uniform within each matrix block so the scaled cone
  // is the same cone.
  Eigen::VectorXd D = Eigen::VectorXd::Ones(m), E = Eigen::VectorXd::Ones(n);
  {
    Eigen::VectorXd rn(m), cn(n);
    for (int pass = 0; pass < 10; ++pass) {
      rn.setZero();
      cn.setZero();
      for (const auto& t : P.trips) {
        const double v = std::abs(D[t.row()] * t.value() * E[t.col()]);
        rn[t.row()] = std::max(rn[t.row()], v);
        cn[t.col()] = std::max(cn[t.col()], v);
      }
      for (std::size_t k = 0; k < lay.psd_size.size(); ++k) {
        const int off = lay.psd_offset[k];
        const int dim = svec_dim(lay.psd_size[k]);
        const double g = rn.segment(off, dim).maxCoeff();
        rn.segment(off, dim).setConstant(g);
      }
      for (int i = 0; i < m; ++i)
        if (rn[i] > 0) D[i] /= std::sqrt(std::clamp(rn[i], 1e-8, 1e8));
      for (int j = 0; j < n; ++j)
        if (cn[j] > 0) E[j] /= std::sqrt(std::clamp(cn[j], 1e-8, 1e8));
    }
  }
  double kappa = 1.0;
  {
    const double nf = linf(E.cwiseProduct(P.f));
    if (nf > 0) kappa = 1.0 / std::clamp(nf, 1e-6, 1e6);
  }

  Eigen::SparseMatrix<double> A(m, n);
  {
    std::vector<Eigen::Triplet<double>> scaled;
    scaled.reserve(P.trips.size());
    for (const auto& t : P.trips)
      scaled.emplace_back(t.row(), t.col(), D[t.row()] * t.value() * E[t.col()]);
    A.setFromTriplets(scaled.begin(), scaled.end());
  }
  Eigen::SparseMatrix<double> AT = A.transpose();
  Eigen::VectorXd b = D.cwiseProduct(P.b);
  Eigen::VectorXd f = kappa * E.cwiseProduct(P.f);

  Eigen::VectorXd w = Eigen::VectorXd::Ones(m);
  w.head(lay.m_eq).setConstant(kEqWeight);

  // Factor A'WA + sigma*I once; rho never enters the matrix.
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  {
    std::vector<Eigen::Triplet<double>> mt;
    mt.reserve(P.trips.size() + n);
    for (int col = 0; col < A.outerSize(); ++col)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it)
        mt.emplace_back(it.row(), it.col(), std::sqrt(w[it.row()]) * it.value());
    for (int j = 0; j < n; ++j) mt.emplace_back(m + j, j, std::sqrt(kSigma));
    Eigen::SparseMatrix<double> M(m + n, n);
    M.setFromTriplets(mt.begin(), mt.end());
    Eigen::SparseMatrix<double> H = Eigen::SparseMatrix<double>(M.transpose() * M);
    chol.compute(H);
    if (chol.info() != Eigen::Success)
      throw Error(Error::Code::BackendFailure, "KKT factorization failed");
  }

  Projector project{&lay};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = b;
  project(s);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd rhs(n), Ax(m), h(m), tmp(m);

  double rho = 0.1;
  std::int64_t last_rho_change = 0;
  bool rho_changed = false;
  Eigen::VectorXd u_prev = u, x_prev = x;

  auto unscale_x = [&](const Eigen::VectorXd& xs) {
    return Eigen::VectorXd(E.cwiseProduct(xs));
  };
  auto unscale_y = [&](const Eigen::VectorXd& us, double rho_now) {
    return Eigen::VectorXd(D.cwiseProduct(w.cwiseProduct(us)) * (rho_now / kappa));
  };

  SolveStatus status = SolveStatus::Inaccurate;
  std::string message;
  std::int64_t it = 0;
  Residuals last_res;

  for (it = 1; it <= opts.max_iters; ++it) {
    // x-update: (A'WA + sigma I) x = -f/rho + A'W(b - s - u) + sigma x
    tmp = w.cwiseProduct(b - s - u);
    rhs.noalias() = AT * tmp;
    rhs += kSigma * x - f / rho;
    x = chol.solve(rhs);
    Ax.noalias() = A * x;
    h = kAlpha * Ax + (1.0 - kAlpha) * (b - s);
    s = b - h - u;
    project(s);
    u += h + s - b;

    const bool last = (it == opts.max_iters);
    bool timed_out = opts.time_limit_s > 0 && elapsed() > opts.time_limit_s;
    if (it % kCheckEvery != 0 && !last && !timed_out) continue;

    Eigen::VectorXd x_o = unscale_x(x);
    Eigen::VectorXd s_o = s.cwiseQuotient(D);
    Eigen::VectorXd y_o = unscale_y(u, rho);
    Eigen::VectorXd Ax_o = A0 * x_o;
    Eigen::VectorXd Aty_o = A0T * y_o;
    const double rp = linf(Ax_o + s_o - P.b) /
                      std::max({1.0, linf(Ax_o), linf(s_o), linf(P.b)});
    const double rd =
        linf(Aty_o + P.f) / std::max({1.0, linf(Aty_o), linf(P.f)});
    const double pobj = P.f.dot(x_o);
    const double dobj = -P.b.dot(y_o);
    const double gap =
        std::abs(pobj - dobj) / std::max({1.0, std::abs(pobj), std::abs(dobj)});
    last_res = {rp, rd, gap};

    if (opts.verbose && (it % (kCheckEvery * 100) == 0 || last))
      std::fprintf(stderr, "  it %8lld  rp %.2e  rd %.2e  gap %.2e  rho %.1e\n",
                   static_cast<long long>(it), rp, rd, gap, rho);

    if (rp <= opts.feas_tol && rd <= opts.feas_tol && gap <= opts.gap_tol) {
      status = SolveStatus::Optimal;
      message = "converged";
      break;
    }

    // Divergence certificates, examined on original data.
    if (!rho_changed) {
      Eigen::VectorXd du = u - u_prev;
      Eigen::VectorXd dy = unscale_y(du, rho);
      project_dual(lay, dy);
      const double ny = linf(dy);
      if (ny > 1e-12 && rp > 10 * opts.feas_tol) {
        dy /= ny;
        const double adj = linf(Eigen::VectorXd(A0T * dy));
        const double slope = P.b.dot(dy);
        if (adj <= 1e-7 && slope <= -1e-6) {
          status = SolveStatus::Infeasible;
          message = "dual improving ray";
          FarkasCertificate cert;
          cert.Y = extract_duals(inst, lay, dy);
          cert.eq_dual = dy.head(lay.m_eq);
          cert.margin = -slope;
          cert.adjoint_residual = adj;
          res.certificate = std::move(cert);
          res.eq_duals = dy.head(lay.m_eq);
          res.block_duals = extract_duals(inst, lay, dy);
          break;
        }
      }
      Eigen::VectorXd dx = unscale_x(x - x_prev);
      const double nx = linf(dx);
      if (nx > 1e-12 && rd > 10 * opts.feas_tol) {
        dx /= nx;
        const double slope = P.f.dot(dx);
        if (slope <= -1e-6) {
          Eigen::VectorXd v = -(A0 * dx);
          if (cone_violation(lay, v) <= 1e-7) {
            status = SolveStatus::Unbounded;
            message = "primal improving ray";
            res.x = dx;
            res.value = std::numeric_limits<double>::infinity();
            res.iters = it;
            res.wall_s = elapsed();
            res.residuals = last_res;
            res.status = status;
            res.message = message;
            return res;
          }
        }
      }
    }
    u_prev = u;
    x_prev = x;
    rho_changed = false;

    if (timed_out) {
      status = SolveStatus::TimeOut;
      message = "time limit reached";
      break;
    }
    if (last) {
      status = SolveStatus::Inaccurate;
      message = "iteration limit reached";
      break;
    }

    if (it - last_rho_change >= kRhoCooldown && rp > 1e-12 && rd > 1e-12) {
      const double ratio = rp / rd;
      if (ratio > 5.0 || ratio < 0.2) {
        double fac = std::clamp(std::sqrt(ratio), 0.1, 10.0);
        const double rho_new = std::clamp(rho * fac, 1e-6, 1e6);
        if (rho_new != rho) {
          u *= rho / rho_new;
          u_prev *= rho / rho_new;
          rho = rho_new;
          last_rho_change = it;
          rho_changed = true;
        }
      }
    }
  }

  Eigen::VectorXd x_o = unscale_x(x);
  Eigen::VectorXd y_o = unscale_y(u, rho);
  res.status = status;
  res.x = x_o;
  res.value = objective_value(inst, x_o);
  res.block_duals = extract_duals(inst, lay, y_o);
  res.eq_duals = y_o.head(lay.m_eq);
  res.residuals = last_res;
  res.iters = it;
  res.wall_s = elapsed();
  res.message = message;
  return res;
}

Phase1Result solve_phase1(const SDPInstance& inst, const SolveOptions& opts) {
  // minimize t with S_j(x) + t I >= 0 and t >= -1; written as max -t.
  SDPInstance aug = inst;
  const std::uint32_t tv = aug.var_count++;
  for (auto& blk : aug.blocks)
    for (int r = 0; r < blk.size; ++r) blk.lin.push_back({r, r, tv, 1.0});
  PSDBlock floor;
  floor.size = 1;
  floor.lin.push_back({0, 0, tv, 1.0});
  floor.cst.push_back({0, 0, 1.0});
  floor.label = "slack-floor";
  aug.blocks.push_back(std::move(floor));
  aug.objective.assign(1, LinTerm{tv, -1.0});
  aug.obj_const = 0.0;
  aug.meta = inst.meta;
  aug.meta.info["phase"] = "1";

  SolveResult r = solve(aug, opts);
  Phase1Result out;
  out.tstar = (r.x.size() > static_cast<int>(tv)) ? r.x[tv] : 0.0;

  if (!r.block_duals.empty()) {
    // Duals over the original blocks certify infeasibility when the optimal
    // slack stays positive: stationarity in x gives the adjoint condition,
    // and the dual objective equals -tstar - mu < 0.
    FarkasCertificate cert;
    cert.Y.assign(r.block_duals.begin(),
                  r.block_duals.begin() + static_cast<long>(inst.blocks.size()));
    cert.eq_dual = r.eq_duals;
    double dual_obj = 0.0;
    for (std::size_t j = 0; j < inst.blocks.size(); ++j)
      for (const auto& e : inst.blocks[j].cst)
        dual_obj += (e.r == e.c ? 1.0 : 2.0) * e.value * cert.Y[j](e.r, e.c);
    for (std::size_t i = 0; i < inst.equalities.size(); ++i)
      dual_obj += inst.equalities[i].rhs * cert.eq_dual[static_cast<long>(i)];
    cert.margin = -dual_obj;
    Eigen::VectorXd adj = Eigen::VectorXd::Zero(inst.var_count);
    for (std::size_t j = 0; j < inst.blocks.size(); ++j)
      for (const auto& e : inst.blocks[j].lin)
        adj[e.var] += (e.r == e.c ? 1.0 : 2.0) * e.coef * cert.Y[j](e.r, e.c);
    for (std::size_t i = 0; i < inst.equalities.size(); ++i)
      for (const auto& t : inst.equalities[i].terms)
        adj[t.var] -= t.coef * cert.eq_dual[static_cast<long>(i)];
    cert.adjoint_residual = linf(adj);
    r.certificate = std::move(cert);
  }
  if (r.x.size() > static_cast<long>(tv)) {
    Eigen::VectorXd xo = r.x.head(tv);
    r.x = xo;
  }
  out.res = std::move(r);
  return out;
}

}  // namespace qbo

#include "qbo/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qbo {

namespace {

double min_eig(const Eigen::MatrixXd& S) {
  if (S.rows() == 1) return S(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  return es.eigenvalues().minCoeff();
}

Eigen::MatrixXd clip_psd(const Eigen::MatrixXd& S) {
  if (S.rows() == 1) return S.cwiseMax(0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      Eigen::MatrixXd((S + S.transpose()) / 2.0));
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// <A, Y> accumulated from upper-triangle entries of the affine map.
void add_adjoint(const PSDBlock& blk, const Eigen::MatrixXd& Y,
                 Eigen::VectorXd& out) {
  for (const auto& e : blk.lin)
    out[e.var] += (e.r == e.c ? 1.0 : 2.0) * e.coef * Y(e.r, e.c);
}

double const_inner(const PSDBlock& blk, const Eigen::MatrixXd& Y) {
  double v = 0.0;
  for (const auto& e : blk.cst)
    v += (e.r == e.c ? 1.0 : 2.0) * e.value * Y(e.r, e.c);
  return v;
}

}  // namespace

VerifyReport verify(const SDPInstance& inst, const SolveResult& res, double tol) {
  VerifyReport rep;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(inst.var_count);
  for (const auto& t : inst.objective) c[t.var] += t.coef;

  if (res.status == SolveStatus::Optimal ||
      res.status == SolveStatus::Inaccurate ||
      res.status == SolveStatus::TimeOut) {
    if (res.x.size() != static_cast<long>(inst.var_count)) {
      rep.detail = "primal point has wrong dimension";
      return rep;
    }
    rep.psd_min_eig = 0.0;
    for (const auto& blk : inst.blocks)
      rep.psd_min_eig = std::min(rep.psd_min_eig, min_eig(block_value(blk, res.x)));
    rep.eq_residual = equality_residual(inst, res.x);
    const double obj = objective_value(inst, res.x);
    rep.obj_mismatch = std::abs(obj - res.value);

    bool dual_ok = true;
    if (res.block_duals.size() == inst.blocks.size() &&
        res.eq_duals.size() == static_cast<long>(inst.equalities.size())) {
      rep.dual_min_eig = 0.0;
      for (const auto& Y : res.block_duals)
        rep.dual_min_eig = std::min(rep.dual_min_eig, min_eig(Y));
      Eigen::VectorXd st = c;
      for (std::size_t j = 0; j < inst.blocks.size(); ++j)
        add_adjoint(inst.blocks[j], res.block_duals[j], st);
      double dual_obj = 0.0;
      for (std::size_t j = 0; j < inst.blocks.size(); ++j)
        dual_obj += const_inner(inst.blocks[j], res.block_duals[j]);
      for (std::size_t i = 0; i < inst.equalities.size(); ++i) {
        const double lam = res.eq_duals[static_cast<long>(i)];
        dual_obj += inst.equalities[i].rhs * lam;
        for (const auto& t : inst.equalities[i].terms) st[t.var] -= t.coef * lam;
      }
      dual_obj += inst.obj_const;
      rep.stationarity = st.size() ? st.cwiseAbs().maxCoeff() : 0.0;
      rep.duality_gap = dual_obj - obj;
      const double cs = std::max(1.0, c.size() ? c.cwiseAbs().maxCoeff() : 0.0);
      dual_ok = rep.dual_min_eig >= -tol && rep.stationarity <= tol * cs &&
                std::abs(rep.duality_gap) <= tol * std::max(1.0, std::abs(obj));
    } else {
      rep.detail = "no dual multipliers supplied";
      dual_ok = false;
    }

    const bool primal_ok =
        rep.psd_min_eig >= -tol && rep.eq_residual <= tol &&
        rep.obj_mismatch <= tol * std::max(1.0, std::abs(res.value));
    if (res.status == SolveStatus::Optimal) {
      rep.pass = primal_ok && dual_ok;
      if (!rep.pass && rep.detail.empty())
        rep.detail = primal_ok ? "dual check failed" : "primal check failed";
    } else {
      rep.pass = false;
      rep.detail = "status carries no verified claim";
    }
    return rep;
  }

  if (res.status == SolveStatus::Infeasible) {
    if (!res.certificate) {
      rep.detail = "infeasible without certificate";
      return rep;
    }
    const FarkasCertificate& cert = *res.certificate;
    if (cert.Y.size() != inst.blocks.size() ||
        cert.eq_dual.size() != static_cast<long>(inst.equalities.size())) {
      rep.detail = "certificate has wrong shape";
      return rep;
    }
    std::vector<Eigen::MatrixXd> Y;
    Y.reserve(cert.Y.size());
    double nrm = cert.eq_dual.size() ? cert.eq_dual.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& Yj : cert.Y) {
      Y.push_back(clip_psd(Yj));
      if (Y.back().size()) nrm = std::max(nrm, Y.back().cwiseAbs().maxCoeff());
    }
    if (nrm <= 0) {
      rep.detail = "zero certificate";
      return rep;
    }
    Eigen::VectorXd lam = cert.eq_dual / nrm;
    for (auto& Yj : Y) Yj /= nrm;

    Eigen::VectorXd adj = Eigen::VectorXd::Zero(inst.var_count);
    double dual_obj = 0.0;
    for (std::size_t j = 0; j < inst.blocks.size(); ++j) {
      add_adjoint(inst.blocks[j], Y[j], adj);
      dual_obj += const_inner(inst.blocks[j], Y[j]);
    }
    for (std::size_t i = 0; i < inst.equalities.size(); ++i) {
      dual_obj += inst.equalities[i].rhs * lam[static_cast<long>(i)];
      for (const auto& t : inst.equalities[i].terms)
        adj[t.var] -= t.coef * lam[static_cast<long>(i)];
    }
    rep.farkas_adjoint = adj.size() ? adj.cwiseAbs().maxCoeff() : 0.0;
    rep.farkas_margin = -dual_obj;
    rep.farkas_radius =
        rep.farkas_margin > 0
            ? (rep.farkas_adjoint > 0
                   ? rep.farkas_margin / rep.farkas_adjoint
                   : std::numeric_limits<double>::infinity())
            : 0.0;
    rep.pass = rep.farkas_adjoint <= tol && rep.farkas_margin >= kFarkasMarginFloor;
    if (!rep.pass)
      rep.detail = rep.farkas_adjoint > tol ? "certificate adjoint residual too large"
                                            : "certificate margin below floor";
    return rep;
  }

  // Unbounded: res.x holds an improving recession direction.
  if (res.status == SolveStatus::Unbounded) {
    if (res.x.size() != static_cast<long>(inst.var_count)) {
      rep.detail = "ray has wrong dimension";
      return rep;
    }
    const double nrm = res.x.size() ? res.x.cwiseAbs().maxCoeff() : 0.0;
    if (nrm <= 0) {
      rep.detail = "zero ray";
      return rep;
    }
    Eigen::VectorXd ray = res.x / nrm;
    const double slope = c.dot(ray);
    double recession = 0.0;
    for (const auto& blk : inst.blocks) {
      PSDBlock lin_only = blk;
      lin_only.cst.clear();
      recession = std::min(recession, min_eig(block_value(lin_only, ray)));
    }
    double eq_dev = 0.0;
    for (const auto& row : inst.equalities) {
      double v = 0.0;
      for (const auto& t : row.terms) v += t.coef * ray[t.var];
      eq_dev = std::max(eq_dev, std::abs(v));
    }
    rep.psd_min_eig = recession;
    rep.eq_residual = eq_dev;
    rep.farkas_margin = slope;
    rep.pass = slope > tol && recession >= -tol && eq_dev <= tol;
    if (!rep.pass) rep.detail = "ray conditions failed";
    return rep;
  }

  rep.detail = "status carries no verified claim";
  return rep;
}

std::string VerifyReport::to_string() const {
  std::ostringstream os;
  os << (pass ? "pass" : "FAIL");
  os << "  min_eig " << psd_min_eig << "  eq " << eq_residual << "  obj "
     << obj_mismatch;
  if (dual_min_eig != 0 || stationarity != 0 || duality_gap != 0)
    os << "  dual_eig " << dual_min_eig << "  stat " << stationarity << "  gap "
       << duality_gap;
  if (farkas_margin != 0 || farkas_adjoint != 0) {
    os << "  margin " << farkas_margin << "  adjoint " << farkas_adjoint;
    if (farkas_radius > 0) os << "  radius " << farkas_radius;
  }
  if (!detail.empty()) os << "  (" << detail << ")";
  return os.str();
}

}  // namespace qbo

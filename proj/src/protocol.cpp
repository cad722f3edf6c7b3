#include "qbo/protocol.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qbo/error.hpp"

namespace qbo {

namespace {

void require_povm(const std::vector<Eigen::MatrixXd>& elems, int dim,
                  const char* what) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(dim, dim);
  for (const Eigen::MatrixXd& e : elems) {
    if (e.rows() != dim || e.cols() != dim)
      throw Error(Error::Code::DimensionMismatch, std::string(what) + ": element size");
    if ((e - e.transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw Error(Error::Code::InvalidPOVM, std::string(what) + ": not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw Error(Error::Code::InvalidPOVM, std::string(what) + ": negative element");
    sum += e;
  }
  if ((sum - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
    throw Error(Error::Code::InvalidPOVM, std::string(what) + ": does not sum to identity");
}

}  // namespace

double evaluate_protocol(const Channel& c, const QuantumProtocol& p) {
  c.check();
  const int msgs = 1 << c.k;
  const int dim = p.dim;
  if (dim < 1) throw Error(Error::Code::DimensionMismatch, "dimension must be positive");
  if (p.psi.size() != static_cast<long>(dim) * dim)
    throw Error(Error::Code::DimensionMismatch, "state length != dim^2");
  if (std::abs(p.psi.norm() - 1.0) > 1e-12)
    throw Error(Error::Code::NotAState, "shared state not normalized");
  if (p.enc.size() != static_cast<std::size_t>(msgs))
    throw Error(Error::Code::DimensionMismatch, "encoder count != 2^k");
  if (p.dec.size() != static_cast<std::size_t>(c.Y))
    throw Error(Error::Code::DimensionMismatch, "decoder count != Y");
  for (const auto& e : p.enc)
    if (e.size() != static_cast<std::size_t>(c.X))
      throw Error(Error::Code::DimensionMismatch, "encoder outcomes != X");
  for (const auto& d : p.dec)
    if (d.size() != static_cast<std::size_t>(msgs))
      throw Error(Error::Code::DimensionMismatch, "decoder outcomes != 2^k");
  for (int i = 0; i < msgs; ++i) require_povm(p.enc[static_cast<std::size_t>(i)], dim, "encoder");
  for (int y = 0; y < c.Y; ++y) require_povm(p.dec[static_cast<std::size_t>(y)], dim, "decoder");

  // <psi| A x B |psi> = Tr[P^T A P B^T] with P the dim x dim reshape of psi.
  Eigen::MatrixXd P(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) P(i, j) = p.psi[static_cast<long>(i) * dim + j];

  double value = 0.0;
  for (int i = 0; i < msgs; ++i)
    for (int x = 0; x < c.X; ++x) {
      const Eigen::MatrixXd left = P.transpose() * p.enc[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)] * P;
      for (int y = 0; y < c.Y; ++y) {
        const double w = rat_to_double(c.W[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]);
        if (w == 0.0) continue;
        value += w * (left * p.dec[static_cast<std::size_t>(y)][static_cast<std::size_t>(i)].transpose()).trace();
      }
    }
  value /= static_cast<double>(msgs);
  if (value < -1e-10 || value > 1.0 + 1e-10)
    throw Error(Error::Code::ValidationFailed, "protocol value escapes [0, 1]");
  return value;
}

HelstromResult helstrom(const Eigen::MatrixXd& rho0, const Eigen::MatrixXd& rho1) {
  const long dim = rho0.rows();
  if (rho0.cols() != dim || rho1.rows() != dim || rho1.cols() != dim)
    throw Error(Error::Code::DimensionMismatch, "state dimensions differ");
  for (const Eigen::MatrixXd* r : {&rho0, &rho1}) {
    if ((*r - r->transpose()).cwiseAbs().maxCoeff() > 1e-10)
      throw Error(Error::Code::NotAState, "state not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*r, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
      throw Error(Error::Code::NotAState, "state not positive");
    if (std::abs(r->trace() - 1.0) > 1e-10)
      throw Error(Error::Code::NotAState, "state trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho0 - rho1);
  HelstromResult out;
  out.projector = Eigen::MatrixXd::Zero(dim, dim);
  double trace_norm = 0.0;
  for (long i = 0; i < dim; ++i) {
    trace_norm += std::abs(es.eigenvalues()[i]);
    if (es.eigenvalues()[i] >= 0.0)
      out.projector += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  }
  out.success = 0.5 + 0.25 * trace_norm;
  return out;
}

QuantumProtocol subset_channel_protocol() {
  QuantumProtocol p;
  p.dim = 4;
  p.psi = Eigen::VectorXd::Zero(16);
  for (int i = 0; i < 4; ++i) p.psi[i * 4 + i] = 0.5;

  Eigen::MatrixXd U(4, 4);
  U << 0, -1, -1, 1,
       1, 0, 1, 1,
       -1, 1, 0, 1,
       -1, -1, 1, 0;
  U /= std::sqrt(3.0);

  p.enc.assign(2, std::vector<Eigen::MatrixXd>());
  for (int x = 0; x < 4; ++x) {
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(4, 4);
    basis(x, x) = 1.0;
    p.enc[0].push_back(basis);
    p.enc[1].push_back(U * basis * U.transpose());
  }

  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) {
      Eigen::MatrixXd rho0 = Eigen::MatrixXd::Zero(4, 4);
      rho0(u, u) = 0.5;
      rho0(v, v) = 0.5;
      const Eigen::MatrixXd rho1 = U * rho0 * U.transpose();
      const Eigen::MatrixXd proj = helstrom(rho0, rho1).projector;
      p.dec.push_back({proj, Eigen::MatrixXd::Identity(4, 4) - proj});
    }
  return p;
}

}  // namespace qbo

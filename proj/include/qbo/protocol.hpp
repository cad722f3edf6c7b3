#pragma once

#include <Eigen/Core>
#include <vector>

#include "qbo/channel.hpp"

namespace qbo {

// Finite-dimensional entanglement-assisted coding protocol: shared pure state
// on dim x dim, encoder POVM {E(x|i)} per message i, decoder POVM {D(i|y)}
// per channel output y.
struct QuantumProtocol {
  int dim = 1;
  Eigen::VectorXd psi;  // dim^2 amplitudes, |i>|j> at index i*dim + j
  std::vector<std::vector<Eigen::MatrixXd>> enc;  // [message][x]
  std::vector<std::vector<Eigen::MatrixXd>> dec;  // [output][message]
};

// (1/2^k) sum_{i,x,y} W(y|x) <psi| E(x|i) x D(i|y) |psi>. Validates POVM
// completeness (1e-10), state norm (1e-12) and dimensions.
double evaluate_protocol(const Channel& c, const QuantumProtocol& p);

struct HelstromResult {
  Eigen::MatrixXd projector;  // onto the nonnegative eigenspace of rho0-rho1
  double success = 0.0;       // 1/2 + (1/4) ||rho0 - rho1||_1, equal priors
};

HelstromResult helstrom(const Eigen::MatrixXd& rho0, const Eigen::MatrixXd& rho1);

// Dimension-4 protocol for the subset channel: maximally entangled state,
// computational basis for message 0, a rotated basis for message 1, Helstrom
// decoders per output pair. Achieves 1/2 + 1/sqrt(6).
QuantumProtocol subset_channel_protocol();

}  // namespace qbo

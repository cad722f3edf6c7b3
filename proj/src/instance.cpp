#include "qbo/instance.hpp"

#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "qbo/error.hpp"

namespace qbo {

void SDPInstance::check() const {
  auto bad = [&](const std::string& what) {
    throw Error(Error::Code::ValidationFailed, "sdp instance: " + what);
  };
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const PSDBlock& b = blocks[j];
    if (b.size < 1) bad("block " + std::to_string(j) + " has size < 1");
    for (const auto& e : b.lin) {
      if (e.var >= var_count) bad("block entry references variable out of range");
      if (e.r < 0 || e.c < e.r || e.c >= b.size) bad("block entry index out of range");
      if (!std::isfinite(e.coef)) bad("non-finite block coefficient");
    }
    for (const auto& e : b.cst) {
      if (e.r < 0 || e.c < e.r || e.c >= b.size) bad("block const index out of range");
      if (!std::isfinite(e.value)) bad("non-finite block constant");
    }
  }
  for (const auto& row : equalities) {
    for (const auto& t : row.terms)
      if (t.var >= var_count) bad("equality references variable out of range");
    if (!std::isfinite(row.rhs)) bad("non-finite equality rhs");
  }
  for (const auto& t : objective) {
    if (t.var >= var_count) bad("objective references variable out of range");
    if (!std::isfinite(t.coef)) bad("non-finite objective coefficient");
  }
}

std::size_t SDPInstance::scalar_block_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks)
    if (b.size == 1) ++n;
  return n;
}

std::string SDPInstance::inventory() const {
  // Group blocks by (size, label) and print counts.
  std::map<std::pair<int, std::string>, int> groups;
  for (const auto& b : blocks) ++groups[{b.size, b.label}];
  std::ostringstream os;
  os << var_count << " vars, " << equalities.size() << " equalities";
  for (const auto& [key, count] : groups) {
    os << ", ";
    if (count > 1) os << count << "x ";
    os << key.first << "x" << key.first;
    if (!key.second.empty()) os << " " << key.second;
  }
  return os.str();
}

Eigen::MatrixXd block_value(const PSDBlock& b, const Eigen::VectorXd& x) {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(b.size, b.size);
  for (const auto& e : b.cst) S(e.r, e.c) += e.value;
  for (const auto& e : b.lin) S(e.r, e.c) += e.coef * x[e.var];
  for (int r = 0; r < b.size; ++r)
    for (int c = r + 1; c < b.size; ++c) S(c, r) = S(r, c);
  return S;
}

double equality_residual(const SDPInstance& inst, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (const auto& row : inst.equalities) {
    double v = -row.rhs;
    for (const auto& t : row.terms) v += t.coef * x[t.var];
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

double objective_value(const SDPInstance& inst, const Eigen::VectorXd& x) {
  double v = inst.obj_const;
  for (const auto& t : inst.objective) v += t.coef * x[t.var];
  return v;
}

void EqualityCollector::add(std::map<std::uint32_t, double> terms, double rhs) {
  EqRow row;
  row.terms.reserve(terms.size());
  for (const auto& [var, coef] : terms)
    if (coef != 0.0) row.terms.push_back({var, coef});
  if (row.terms.empty()) {
    if (rhs != 0.0)
      throw Error(Error::Code::ValidationFailed,
                  "equality row cancelled to 0 = " + std::to_string(rhs));
    return;
  }
  row.rhs = rhs;
  if (row.terms.front().coef < 0.0) {
    for (auto& t : row.terms) t.coef = -t.coef;
    row.rhs = -row.rhs;
  }
  // Exact signature over the bit patterns; map iteration is var-sorted.
  std::string sig;
  sig.reserve(row.terms.size() * 12 + 8);
  auto put = [&sig](const void* p, std::size_t n) {
    sig.append(static_cast<const char*>(p), n);
  };
  for (const auto& t : row.terms) {
    put(&t.var, sizeof t.var);
    put(&t.coef, sizeof t.coef);
  }
  put(&row.rhs, sizeof row.rhs);
  if (seen_.insert(sig).second) rows_.push_back(std::move(row));
}

}  // namespace qbo

#include "gpcons/control.hpp"

#include <cmath>

namespace gpcons {

ControlMode parse_control_mode(const std::string& name) {
  if (name == "none") return ControlMode::NoLearning;
  if (name == "individual") return ControlMode::IndividualGP;
  if (name == "distributed") return ControlMode::DistributedGP;
  throw ValidationError("unknown control mode '" + name + "' (expected none|individual|distributed)");
}

std::string to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::NoLearning: return "none";
    case ControlMode::IndividualGP: return "individual";
    case ControlMode::DistributedGP: return "distributed";
  }
  return "unknown";
}

bool uses_learning(ControlMode mode) { return mode != ControlMode::NoLearning; }

ConsensusState consensus_error(const Matrix& states, const Vector& leader_state, const Topology& topology) {
  const Index n = topology.size();
  if (states.rows() != n || states.cols() != leader_state.size()) {
    throw ValidationError("consensus_error: expected one state row per agent matching the leader dimension");
  }
  ConsensusState out;
  out.e = states.rowwise() - leader_state.transpose();
  out.xi = Matrix::Zero(n, states.cols());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double a = topology.a(i, j);
      if (a != 0.0) out.xi.row(i) += a * (out.e.row(i) - out.e.row(j));
    }
    out.xi.row(i) += topology.b(i) * out.e.row(i);
  }
  return out;
}

Vector control_input(ControlMode mode, double gain, const Vector& xi_i, const std::optional<Vector>& prediction,
                     const std::optional<Vector>& f_hat_value) {
  if (!(gain > 0.0)) throw ValidationError("control gain must be positive");
  Vector u = -gain * xi_i;
  if (uses_learning(mode)) {
    if (!prediction) throw ValidationError("control_input: mode '" + to_string(mode) + "' needs a prediction");
    if (prediction->size() != xi_i.size()) throw ValidationError("control_input: prediction dimension mismatch");
    u -= *prediction;
  } else if (prediction) {
    throw ValidationError("control_input: mode 'none' takes no prediction");
  }
  if (f_hat_value) u -= *f_hat_value;
  return u;
}

double theorem1_nu(double leader_bound, const Vector& model_error_norms) {
  return static_cast<double>(model_error_norms.size()) * leader_bound * leader_bound +
         model_error_norms.squaredNorm();
}

double theorem1_radius(double nu, double k_star, double lambda_min) {
  if (!(k_star > 0.0)) throw ValidationError("theorem1_radius: k_star must be positive");
  if (!(lambda_min > 0.0)) throw ValidationError("theorem1_radius: lambda_min must be positive");
  if (!(nu >= 0.0)) throw ValidationError("theorem1_radius: nu must be non-negative");
  return std::sqrt(2.0 * nu) / (k_star * lambda_min);
}

void validate_gains(const std::vector<double>& gains, Index agents) {
  if (static_cast<Index>(gains.size()) != agents) {
    throw ValidationError("gains: expected " + std::to_string(agents) + " entries, got " +
                          std::to_string(gains.size()));
  }
  for (double k : gains) {
    if (!std::isfinite(k) || !(k > 0.0)) throw ValidationError("gains must be finite and > 0");
  }
}

}  // namespace gpcons

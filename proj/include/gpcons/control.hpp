#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpcons/common.hpp"
#include "gpcons/topology.hpp"

namespace gpcons {

enum class ControlMode { NoLearning, IndividualGP, DistributedGP };

ControlMode parse_control_mode(const std::string& name);
/// "none", "individual", "distributed".
std::string to_string(ControlMode mode);
bool uses_learning(ControlMode mode);

/// Per-agent tracking error e_i = x_i - x_l and consensus error
/// xi_i = sum_j a_ij (e_i - e_j) + b_i e_i, one agent per row.
struct ConsensusState {
  Matrix e;
  Matrix xi;
};

ConsensusState consensus_error(const Matrix& states, const Vector& leader_state, const Topology& topology);

/// u_i = -k_i xi_i - prediction - f_hat. `prediction` must be present exactly
/// when the mode learns (own posterior mean for IndividualGP, fused mean for
/// DistributedGP).
Vector control_input(ControlMode mode, double gain, const Vector& xi_i, const std::optional<Vector>& prediction,
                     const std::optional<Vector>& f_hat_value = std::nullopt);

/// sum_i (f_l_bound^2 + ||model_error_i||^2).
double theorem1_nu(double leader_bound, const Vector& model_error_norms);

/// r = sqrt(2 nu) / (k_star lambda_min).
double theorem1_radius(double nu, double k_star, double lambda_min);

void validate_gains(const std::vector<double>& gains, Index agents);

}  // namespace gpcons

#pragma once

#include <optional>
#include <vector>

#include "gpcons/common.hpp"
#include "gpcons/gp.hpp"
#include "gpcons/plant.hpp"
#include "gpcons/topology.hpp"

#include "json.hpp"

namespace gpcons {

struct BoundSettings {
  double rho = 0.1;
  double delta = 0.05;
  /// Points per axis for the Lipschitz and grid-maximum scans.
  Index grid_points = 200;
  /// Optional overrides of the estimated Lipschitz constants.
  std::optional<double> lipschitz_f;
  std::optional<double> lipschitz_mean;
  std::optional<double> lipschitz_variance;

  void validate() const;
};

/// Uniform error bound and ultimate-bound radius for a trained model bank.
/// Matrices indexed (agent, output dimension).
struct BoundReport {
  Index agents = 0;
  Index dim = 0;
  double rho = 0.0;
  double delta = 0.0;
  double r_omega = 0.0;
  double beta = 0.0;
  double probability = 0.0;  // (1 - delta)^m
  Vector grid_spacing;

  Vector lipschitz_f;  // per output dimension of the residual
  Matrix lipschitz_mean;
  Matrix lipschitz_variance;
  Matrix gamma;

  /// max over the domain grid of the fused pointwise bound of agent i, dim k
  Matrix grid_max_bound;
  /// max over the domain grid of the measured |tau_k - fused mean_ik|
  Matrix grid_max_error;

  double lambda_min = 0.0;
  double k_star = 0.0;
  double leader_bound = 0.0;

  double nu_grid_bound = 0.0;
  double nu_grid_measured = 0.0;
  std::optional<double> nu_trajectory_tail;
  double radius_grid_bound = 0.0;
  double radius_grid_measured = 0.0;
  std::optional<double> radius_trajectory_tail;

  /// Records the trajectory-tail nu and its radius.
  void set_trajectory_nu(double nu);
};

BoundReport build_bound_report(const DynamicsSpec& spec, const Topology& topology,
                               const std::vector<AgentModels>& models, const Box& domain,
                               const BoundSettings& settings, const std::vector<double>& gains);

nlohmann::json to_json(const BoundReport& report);

}  // namespace gpcons

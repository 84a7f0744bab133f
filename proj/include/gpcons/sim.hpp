#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gpcons/common.hpp"
#include "gpcons/control.hpp"
#include "gpcons/gp.hpp"
#include "gpcons/plant.hpp"
#include "gpcons/topology.hpp"

namespace gpcons {

struct SimConfig {
  double dt = 0.01;
  double horizon = 100.0;
  /// Per-dimension range for the uniformly drawn initial agent states.
  Box init_range;
  std::uint64_t seed = 0;
  ControlMode mode = ControlMode::DistributedGP;
  std::vector<double> gains;
  /// Overrides DynamicsSpec::leader_initial.
  std::optional<Vector> leader_initial;
  /// Overrides the random draw; one agent per row.
  std::optional<Matrix> initial_states;
  double divergence_limit = 1e6;
  /// Evaluate per-agent predictions and controls under OpenMP.
  bool parallel = true;

  Index steps() const;
  void validate(Index agents, Index dim) const;
};

/// One row per logged step on the uniform grid t_s = s * dt. Per-agent
/// blocks are agent-major: columns [i*m, (i+1)*m) belong to agent i.
/// Row s holds the state at t_s and the control applied over [t_s, t_s + dt).
struct TrajectoryLog {
  Index agents = 0;
  Index dim = 0;
  Vector time;
  Matrix leader;       // S x m
  Matrix states;       // S x n*m
  Matrix controls;     // S x n*m
  Matrix errors;       // S x n*m, e_i = x_i - x_l
  Matrix consensus;    // S x n*m, xi_i
  Vector lyapunov;     // S, 0.5 e'(L~ (x) I)e
  Matrix accumulated;  // S x m, E_j = sum_i |x_ij - x_lj|
  Matrix model_error;  // S x n, ||tau(x_i) - prediction_i||

  Index steps() const { return time.size(); }
  double error_norm(Index step) const { return errors.row(step).norm(); }
  void resize(Index rows);
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, TrajectoryLog partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const TrajectoryLog& partial() const { return partial_; }

 private:
  TrajectoryLog partial_;
};

using OdeField = std::function<Vector(const Vector& state, double t)>;

/// Classical fourth-order Runge-Kutta step. Throws DivergenceError (with an
/// empty log) if any stage derivative is non-finite.
Vector rk4_step(const OdeField& field, const Vector& state, double t, double dt);

/// Closed-loop leader-follower simulation. `models[i][k]` is agent i's GP for
/// residual component k; it may be empty for ControlMode::NoLearning.
TrajectoryLog run(const SimConfig& config, const DynamicsSpec& spec, const Topology& topology,
                  const std::vector<AgentModels>& models);

/// 0.5 * e' (L~ (x) I_m) e for agent-major stacked e.
double lyapunov(const Vector& stacked_error, const GroundedLaplacian& grounded, Index dim);

struct Containment {
  bool contained = false;
  /// First time after which ||e(t)|| <= r for the rest of the log.
  double since = 0.0;
  Index since_step = -1;
};

Containment radius_monitor(const TrajectoryLog& log, double radius);

/// sup over the last `tail_fraction` of the log of
/// sum_i (leader_bound^2 + model_error_i^2).
double trajectory_tail_nu(const TrajectoryLog& log, double leader_bound, double tail_fraction = 0.5);

struct DecreaseReport {
  Index outside = 0;     // steps with ||e|| > r (excluding the last row)
  Index decreasing = 0;  // of those, steps with V(s+1) < V(s)
  double fraction() const { return outside == 0 ? 1.0 : static_cast<double>(decreasing) / static_cast<double>(outside); }
};

DecreaseReport lyapunov_decrease(const TrajectoryLog& log, double radius);

/// Mean of E_j over the last `tail_fraction` of the log, one entry per dim.
Vector tail_mean_accumulated(const TrajectoryLog& log, double tail_fraction = 0.5);

/// Largest |state component| reached by any agent or the leader, relative to
/// the box: the smallest inflation factor that contains every state.
double max_domain_inflation(const TrajectoryLog& log, const Box& domain);

}  // namespace gpcons

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gpcons/common.hpp"
#include "gpcons/gp.hpp"

namespace gpcons {

using StateField = std::function<Vector(const Vector&)>;
using LeaderField = std::function<Vector(const Vector&, double)>;

/// How the reference leader signal (sin, cos)(0.02 pi t) is applied.
enum class LeaderProfile {
  /// The signal is the leader position; f_l is its time derivative and the
  /// leader stays on the unit circle.
  Trajectory,
  /// The signal is the leader velocity; the leader drifts on a circle of
  /// radius 1 / (0.02 pi) around its start point.
  Velocity,
};

LeaderProfile parse_leader_profile(const std::string& name);
std::string to_string(LeaderProfile profile);

/// Follower drift f, disturbance h, the controller's prior model f_hat and
/// the leader vector field. All callables must be pure.
struct DynamicsSpec {
  std::string name;
  Index dim = 0;
  StateField f;
  StateField h;
  /// Known part of the dynamics; empty means f_hat = 0.
  StateField f_hat;
  LeaderField leader;
  /// Bound on ||leader(x, t)|| over all t.
  double leader_bound = 0.0;
  Vector leader_initial;
};

/// f(x) - f_hat(x) + h(x): the part of the dynamics the GPs have to learn.
Vector residual(const DynamicsSpec& spec, const Vector& x);

/// Two-state benchmark plant:
///   f = (2 x2 sin x1, x1 cos(0.2 x2^2 + x2)),  h = (sin x2, sin x1),
/// leader signal (sin, cos)(0.02 pi t) applied per `profile`.
DynamicsSpec builtin_reference_plant(LeaderProfile profile);

/// Same leader, f = h = 0. Nothing to learn; used as a control experiment.
DynamicsSpec builtin_zero_plant(LeaderProfile profile);

/// Extension point: custom plants register a factory under a config key.
using PlantFactory = std::function<DynamicsSpec(LeaderProfile)>;
void register_plant(const std::string& key, PlantFactory factory);
DynamicsSpec make_plant(const std::string& key, LeaderProfile profile);
std::vector<std::string> plant_keys();

enum class Sampling { Grid, UniformRandom };
enum class Partition { Quadrant };

Sampling parse_sampling(const std::string& name);
Partition parse_partition(const std::string& name);

struct TrainingSpec {
  Box domain;
  Index total = 400;
  Sampling sampling = Sampling::Grid;
  Partition partition = Partition::Quadrant;
  double noise_variance = 0.01;
  std::uint64_t seed = 0;
};

/// One agent's training inputs with all output dimensions of the residual.
struct AgentTrainingSet {
  Matrix inputs;   // M x m
  Matrix outputs;  // M x m, column k observes residual component k

  Dataset for_dim(Index k) const { return {inputs, outputs.col(k)}; }
};

/// Samples `spec.total` inputs over the domain (a uniform grid with an equal
/// count per axis, or uniform random), observes the residual with additive
/// N(0, noise_variance) per output, and splits the points among `agents` by
/// orthant around the domain center: the orthant index is
/// sum_k [x_k >= center_k] * 2^k, so for m = 2 agent 1 gets x1 < 0, x2 < 0,
/// agent 2 gets x1 >= 0, x2 < 0, and so on. Deterministic given the seed.
std::vector<AgentTrainingSet> generate_training_data(const DynamicsSpec& spec, const TrainingSpec& training,
                                                     Index agents);

/// Numerically probed sup of ||leader(x_l(t), t)|| over t in [0, horizon],
/// following the leader's own flow from leader_initial.
double probe_leader_bound(const DynamicsSpec& spec, double horizon, double dt);

}  // namespace gpcons

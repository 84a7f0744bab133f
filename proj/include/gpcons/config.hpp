#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpcons/bounds.hpp"
#include "gpcons/gp.hpp"
#include "gpcons/plant.hpp"
#include "gpcons/sim.hpp"
#include "gpcons/topology.hpp"

#include "json.hpp"

namespace gpcons {

/// Everything needed to reproduce one experiment. See configs/paper_sec5.json
/// and README.md for the file schema.
struct ExperimentConfig {
  std::string plant = "paper_sec5";
  LeaderProfile leader_profile = LeaderProfile::Trajectory;
  std::uint64_t seed = 1;
  std::optional<std::string> output_dir;

  Index agents = 4;
  /// Exactly one of `edges` / `adjacency` describes the follower graph.
  std::vector<Edge> edges;
  std::optional<Matrix> adjacency;
  std::vector<Index> leader_links;  // 0-based
  bool weighted = false;

  SimConfig sim;
  KernelParams kernel;
  TrainingSpec training;
  BoundSettings bounds;
  double tail_fraction = 0.5;

  Topology topology() const;
  DynamicsSpec dynamics() const;
  /// sim with seed and mode applied.
  SimConfig sim_config(ControlMode mode) const;
  /// Checks every module invariant, including Assumption 3.
  void validate() const;
};

/// The reference setup: four agents, gains 2, 20 x 20 training grid on
/// [-2, 2]^2 split by quadrant, dt = 0.01, T = 100.
ExperimentConfig default_config();

/// Strict parse on top of default_config(): unknown keys and wrong types are
/// ValidationErrors. Agent ids in the document are 1-based.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

/// Canonical, fully expanded form (parse_config(to_json(c)) == c).
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace gpcons

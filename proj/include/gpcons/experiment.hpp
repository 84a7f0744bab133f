#pragma once

#include <array>
#include <string>
#include <vector>

#include "gpcons/bounds.hpp"
#include "gpcons/config.hpp"
#include "gpcons/sim.hpp"

#include "json.hpp"

namespace gpcons {

struct ModelBank {
  std::vector<AgentTrainingSet> data;
  std::vector<AgentModels> models;  // [agent][output dim]
};

/// Generates the training sets and fits one GP per agent per output.
ModelBank train_models(const ExperimentConfig& config, const DynamicsSpec& spec, Index agents);

struct ModeResult {
  ControlMode mode = ControlMode::NoLearning;
  TrajectoryLog log;
  Vector tail_mean;  // tail mean of E_j
  double nu_tail = 0.0;
  double radius = 0.0;
  Containment containment;
};

ModeResult run_mode(const ExperimentConfig& config, ControlMode mode, const DynamicsSpec& spec,
                    const Topology& topology, const ModelBank& bank);

struct Comparison {
  std::array<ModeResult, 3> results;  // none, individual, distributed
  /// Per dim: E_j(distributed) < E_j(individual) < E_j(none) in tail means.
  std::vector<bool> ordered;
  bool ordering_holds() const;
};

/// Runs the three control laws on shared training data and initial states.
Comparison compare_modes(const ExperimentConfig& config);

nlohmann::json to_json(const Comparison& comparison, double tail_fraction);

/// Config hash, seed and build information sufficient to regenerate the
/// artifacts of `command`.
nlohmann::json run_manifest(const ExperimentConfig& config, const std::string& command,
                            const std::vector<std::string>& artifacts);

extern const char* const kVersion;

}  // namespace gpcons

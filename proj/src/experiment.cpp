#include "gpcons/experiment.hpp"

#include <algorithm>

#include "gpcons/io.hpp"

namespace gpcons {

const char* const kVersion = "0.1.0";

ModelBank train_models(const ExperimentConfig& config, const DynamicsSpec& spec, Index agents) {
  ModelBank bank;
  bank.data = generate_training_data(spec, config.training, agents);
  for (const auto& set : bank.data) {
    AgentModels per_dim;
    for (Index k = 0; k < spec.dim; ++k) per_dim.push_back(fit(set.for_dim(k), config.kernel));
    bank.models.push_back(std::move(per_dim));
  }
  return bank;
}

ModeResult run_mode(const ExperimentConfig& config, ControlMode mode, const DynamicsSpec& spec,
                    const Topology& topology, const ModelBank& bank) {
  ModeResult r;
  r.mode = mode;
  r.log = run(config.sim_config(mode), spec, topology, bank.models);
  r.tail_mean = tail_mean_accumulated(r.log, config.tail_fraction);
  r.nu_tail = trajectory_tail_nu(r.log, spec.leader_bound, config.tail_fraction);
  const auto& gains = config.sim.gains;
  r.radius = theorem1_radius(r.nu_tail, *std::min_element(gains.begin(), gains.end()),
                             grounded_laplacian(topology).lambda_min);
  r.containment = radius_monitor(r.log, r.radius);
  return r;
}

bool Comparison::ordering_holds() const {
  return std::all_of(ordered.begin(), ordered.end(), [](bool b) { return b; });
}

Comparison compare_modes(const ExperimentConfig& config) {
  config.validate();
  const DynamicsSpec spec = config.dynamics();
  const Topology topology = config.topology();
  const ModelBank bank = train_models(config, spec, topology.size());

  Comparison c;
  const std::array modes{ControlMode::NoLearning, ControlMode::IndividualGP, ControlMode::DistributedGP};
  for (std::size_t k = 0; k < modes.size(); ++k) c.results[k] = run_mode(config, modes[k], spec, topology, bank);

  const Vector& none = c.results[0].tail_mean;
  const Vector& indiv = c.results[1].tail_mean;
  const Vector& dist = c.results[2].tail_mean;
  for (Index j = 0; j < spec.dim; ++j) c.ordered.push_back(dist(j) < indiv(j) && indiv(j) < none(j));
  return c;
}

nlohmann::json to_json(const Comparison& comparison, double tail_fraction) {
  nlohmann::json modes;
  for (const auto& r : comparison.results) {
    nlohmann::json entry;
    entry["tail_mean_E"] = std::vector<double>(r.tail_mean.data(), r.tail_mean.data() + r.tail_mean.size());
    entry["nu_trajectory_tail"] = r.nu_tail;
    entry["radius"] = r.radius;
    entry["contained"] = r.containment.contained;
    if (r.containment.contained) entry["contained_since"] = r.containment.since;
    entry["final_error_norm"] = r.log.error_norm(r.log.steps() - 1);
    modes[to_string(r.mode)] = entry;
  }
  nlohmann::json j;
  j["tail_fraction"] = tail_fraction;
  j["modes"] = modes;
  nlohmann::json ordered = nlohmann::json::array();
  for (bool b : comparison.ordered) ordered.push_back(b);
  j["ordered_per_dim"] = ordered;
  j["ordering_holds"] = comparison.ordering_holds();
  return j;
}

nlohmann::json run_manifest(const ExperimentConfig& config, const std::string& command,
                            const std::vector<std::string>& artifacts) {
  const nlohmann::json canonical = to_json(config);
  nlohmann::json j;
  j["command"] = command;
  j["config"] = canonical;
  j["config_hash"] = io::fnv1a_hex(canonical.dump());
  j["seed"] = config.seed;
  j["version"] = kVersion;
#ifdef __VERSION__
  j["compiler"] = __VERSION__;
#endif
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["artifacts"] = artifacts;
  return j;
}

}  // namespace gpcons

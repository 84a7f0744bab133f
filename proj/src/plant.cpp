#include "gpcons/plant.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <random>

namespace gpcons {
namespace {

constexpr double kLeaderFrequency = 0.02 * std::numbers::pi;

LeaderField leader_field(LeaderProfile profile) {
  if (profile == LeaderProfile::Velocity) {
    return [](const Vector&, double t) {
      Vector v(2);
      v << std::sin(kLeaderFrequency * t), std::cos(kLeaderFrequency * t);
      return v;
    };
  }
  return [](const Vector&, double t) {
    Vector v(2);
    v << kLeaderFrequency * std::cos(kLeaderFrequency * t), -kLeaderFrequency * std::sin(kLeaderFrequency * t);
    return v;
  };
}

void attach_leader(DynamicsSpec& spec, LeaderProfile profile) {
  spec.leader = leader_field(profile);
  spec.leader_initial = Vector::Zero(2);
  if (profile == LeaderProfile::Velocity) {
    spec.leader_bound = 1.0;
  } else {
    spec.leader_bound = kLeaderFrequency;
    spec.leader_initial << 0.0, 1.0;  // (sin 0, cos 0)
  }
}

struct Registry {
  std::mutex mutex;
  std::map<std::string, PlantFactory> factories{
      {"paper_sec5", builtin_reference_plant},
      {"zero", builtin_zero_plant},
  };
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

LeaderProfile parse_leader_profile(const std::string& name) {
  if (name == "trajectory") return LeaderProfile::Trajectory;
  if (name == "velocity") return LeaderProfile::Velocity;
  throw ValidationError("unknown leader_profile '" + name + "' (expected trajectory|velocity)");
}

std::string to_string(LeaderProfile profile) {
  return profile == LeaderProfile::Trajectory ? "trajectory" : "velocity";
}

Vector residual(const DynamicsSpec& spec, const Vector& x) {
  Vector r = spec.f(x) + spec.h(x);
  if (spec.f_hat) r -= spec.f_hat(x);
  return r;
}

DynamicsSpec builtin_reference_plant(LeaderProfile profile) {
  DynamicsSpec spec;
  spec.name = "paper_sec5";
  spec.dim = 2;
  spec.f = [](const Vector& x) {
    Vector v(2);
    v << 2.0 * x(1) * std::sin(x(0)), x(0) * std::cos(0.2 * x(1) * x(1) + x(1));
    return v;
  };
  spec.h = [](const Vector& x) {
    Vector v(2);
    v << std::sin(x(1)), std::sin(x(0));
    return v;
  };
  attach_leader(spec, profile);
  return spec;
}

DynamicsSpec builtin_zero_plant(LeaderProfile profile) {
  DynamicsSpec spec;
  spec.name = "zero";
  spec.dim = 2;
  spec.f = [](const Vector& x) { return Vector::Zero(x.size()).eval(); };
  spec.h = spec.f;
  attach_leader(spec, profile);
  return spec;
}

void register_plant(const std::string& key, PlantFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[key] = std::move(factory);
}

DynamicsSpec make_plant(const std::string& key, LeaderProfile profile) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  const auto it = r.factories.find(key);
  if (it == r.factories.end()) throw ValidationError("unknown plant '" + key + "'");
  return it->second(profile);
}

std::vector<std::string> plant_keys() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> keys;
  for (const auto& [k, _] : r.factories) keys.push_back(k);
  return keys;
}

Sampling parse_sampling(const std::string& name) {
  if (name == "grid") return Sampling::Grid;
  if (name == "uniform_random") return Sampling::UniformRandom;
  throw ValidationError("unknown sampling '" + name + "' (expected grid|uniform_random)");
}

Partition parse_partition(const std::string& name) {
  if (name == "quadrant") return Partition::Quadrant;
  throw ValidationError("unknown partition '" + name + "' (expected quadrant)");
}

std::vector<AgentTrainingSet> generate_training_data(const DynamicsSpec& spec, const TrainingSpec& training,
                                                     Index agents) {
  training.domain.validate("training domain");
  const Index m = training.domain.dim();
  if (m != spec.dim) throw ValidationError("training domain dimension does not match the plant");
  if (training.total < 1) throw ValidationError("training total must be positive");
  if (!(training.noise_variance >= 0.0)) throw ValidationError("training noise_variance must be >= 0");
  const Index parts = Index{1} << m;
  if (parts != agents) {
    throw ValidationError("quadrant partition yields " + std::to_string(parts) + " parts but topology has " +
                          std::to_string(agents) + " agents");
  }

  std::seed_seq seq{static_cast<std::uint32_t>(training.seed), static_cast<std::uint32_t>(training.seed >> 32),
                    1u};
  std::mt19937_64 rng(seq);

  Matrix inputs(training.total, m);
  if (training.sampling == Sampling::Grid) {
    const double per_axis = std::round(std::pow(static_cast<double>(training.total), 1.0 / static_cast<double>(m)));
    const auto count = static_cast<Index>(per_axis);
    Index product = 1;
    for (Index k = 0; k < m; ++k) product *= count;
    if (count < 2 || product != training.total) {
      throw ValidationError("grid sampling needs total = c^m with c >= 2; got " + std::to_string(training.total));
    }
    inputs = Grid(training.domain, count).points();
  } else {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index p = 0; p < training.total; ++p) {
      for (Index k = 0; k < m; ++k) {
        inputs(p, k) = training.domain.lower(k) + unit(rng) * training.domain.width()(k);
      }
    }
  }

  const double sd = std::sqrt(training.noise_variance);
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix outputs(training.total, m);
  for (Index p = 0; p < training.total; ++p) {
    const Vector r = residual(spec, inputs.row(p).transpose());
    for (Index k = 0; k < m; ++k) {
      outputs(p, k) = sd > 0.0 ? r(k) + sd * noise(rng) : r(k);
    }
  }

  const Vector center = training.domain.center();
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(agents));
  for (Index p = 0; p < training.total; ++p) {
    Index part = 0;
    for (Index k = 0; k < m; ++k) {
      if (inputs(p, k) >= center(k)) part |= Index{1} << k;
    }
    members[static_cast<std::size_t>(part)].push_back(p);
  }

  std::vector<AgentTrainingSet> out(static_cast<std::size_t>(agents));
  for (Index a = 0; a < agents; ++a) {
    const auto& idx = members[static_cast<std::size_t>(a)];
    auto& set = out[static_cast<std::size_t>(a)];
    set.inputs.resize(static_cast<Index>(idx.size()), m);
    set.outputs.resize(static_cast<Index>(idx.size()), m);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      set.inputs.row(static_cast<Index>(r)) = inputs.row(idx[r]);
      set.outputs.row(static_cast<Index>(r)) = outputs.row(idx[r]);
    }
  }
  return out;
}

double probe_leader_bound(const DynamicsSpec& spec, double horizon, double dt) {
  Vector xl = spec.leader_initial;
  double sup = 0.0;
  const auto steps = static_cast<Index>(std::llround(horizon / dt));
  for (Index s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    const Vector v = spec.leader(xl, t);
    sup = std::max(sup, v.norm());
    xl += dt * v;
  }
  return sup;
}

}  // namespace gpcons

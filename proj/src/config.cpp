#include "gpcons/config.hpp"

#include <fstream>
#include <set>

namespace gpcons {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& section) {
  if (!obj.is_object()) throw ValidationError("config: '" + section + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ValidationError("config: unknown key '" + key + "' in " + section);
  }
}

Vector vector_from(const json& j, Index dim, const std::string& what) {
  if (j.is_number()) return Vector::Constant(dim, j.get<double>());
  if (!j.is_array()) throw ValidationError("config: " + what + " must be a number or an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = j[k].get<double>();
  if (v.size() != dim) {
    throw ValidationError("config: " + what + " needs " + std::to_string(dim) + " entries");
  }
  return v;
}

// [lo, hi] applied to every axis, or {"lower": [...], "upper": [...]}.
Box box_from(const json& j, Index dim, const std::string& what) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {Vector::Constant(dim, j[0].get<double>()), Vector::Constant(dim, j[1].get<double>())};
  }
  check_keys(j, {"lower", "upper"}, what);
  if (!j.contains("lower") || !j.contains("upper")) throw ValidationError("config: " + what + " needs lower and upper");
  return {vector_from(j["lower"], dim, what + ".lower"), vector_from(j["upper"], dim, what + ".upper")};
}

json vector_json(const Vector& v) {
  auto out = json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

json box_json(const Box& b) { return {{"lower", vector_json(b.lower)}, {"upper", vector_json(b.upper)}}; }

Index agent_id(const json& j, Index agents, const std::string& what) {
  const auto id = j.get<std::int64_t>();
  if (id < 1 || id > agents) {
    throw ValidationError("config: " + what + " references agent " + std::to_string(id) + " (valid: 1.." +
                          std::to_string(agents) + ")");
  }
  return static_cast<Index>(id - 1);
}

void parse_topology(const json& t, ExperimentConfig& c) {
  check_keys(t, {"agents", "edges", "adjacency", "leader_links", "weighted"}, "topology");
  if (t.contains("weighted")) c.weighted = t["weighted"].get<bool>();
  if (t.contains("adjacency")) {
    if (t.contains("edges")) throw ValidationError("config: topology takes either edges or adjacency, not both");
    const json& a = t["adjacency"];
    const auto n = static_cast<Index>(a.size());
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) {
      if (!a[static_cast<std::size_t>(i)].is_array() || static_cast<Index>(a[static_cast<std::size_t>(i)].size()) != n) {
        throw ValidationError("config: adjacency must be a square matrix");
      }
      for (Index j = 0; j < n; ++j) m(i, j) = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get<double>();
    }
    c.adjacency = m;
    c.edges.clear();
    c.agents = n;
    if (t.contains("agents") && t["agents"].get<Index>() != n) {
      throw ValidationError("config: topology.agents disagrees with the adjacency size");
    }
  } else if (t.contains("agents") || t.contains("edges")) {
    if (t.contains("agents")) c.agents = t["agents"].get<Index>();
    if (c.agents < 1) throw ValidationError("config: topology.agents must be >= 1");
    c.adjacency.reset();
    c.edges.clear();
    if (t.contains("edges")) {
      for (const json& e : t["edges"]) {
        if (!e.is_array() || e.size() < 2 || e.size() > 3) {
          throw ValidationError("config: each edge is [i, j] or [i, j, weight]");
        }
        Edge edge{agent_id(e[0], c.agents, "edge"), agent_id(e[1], c.agents, "edge"), 1.0};
        if (e.size() == 3) edge.weight = e[2].get<double>();
        c.edges.push_back(edge);
      }
    }
  }
  if (t.contains("leader_links")) {
    c.leader_links.clear();
    for (const json& id : t["leader_links"]) c.leader_links.push_back(agent_id(id, c.agents, "leader_links"));
  }
}

}  // namespace

Topology ExperimentConfig::topology() const {
  if (adjacency) {
    Vector b = Vector::Zero(adjacency->rows());
    for (Index i : leader_links) b(i) = 1.0;
    return Topology(*adjacency, b, weighted);
  }
  return Topology::from_edges(agents, edges, leader_links, weighted);
}

DynamicsSpec ExperimentConfig::dynamics() const { return make_plant(plant, leader_profile); }

SimConfig ExperimentConfig::sim_config(ControlMode mode) const {
  SimConfig s = sim;
  s.seed = seed;
  s.mode = mode;
  return s;
}

void ExperimentConfig::validate() const {
  const DynamicsSpec spec = dynamics();
  const Topology topo = topology();
  const auto check = check_assumption3(topo);
  if (!check.ok()) throw ValidationError("assumption 3 violated: " + check.diagnostic);
  sim.validate(topo.size(), spec.dim);
  kernel.validate(spec.dim);
  training.domain.validate("training domain");
  if (training.domain.dim() != spec.dim) throw ValidationError("training domain dimension does not match the plant");
  if (!(training.noise_variance >= 0.0)) throw ValidationError("training noise_variance must be >= 0");
  bounds.validate();
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ValidationError("tail_fraction must lie in (0, 1]");
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.agents = 4;
  c.edges = {{0, 2}, {1, 2}, {1, 3}};
  c.leader_links = {0, 1};
  const Index m = 2;
  c.sim.dt = 0.01;
  c.sim.horizon = 100.0;
  c.sim.init_range = {Vector::Constant(m, -2.0), Vector::Constant(m, 2.0)};
  c.sim.mode = ControlMode::DistributedGP;
  c.sim.gains = std::vector<double>(4, 2.0);
  c.kernel = KernelParams::defaults(m);
  c.training.domain = {Vector::Constant(m, -2.0), Vector::Constant(m, 2.0)};
  c.training.total = 400;
  c.training.noise_variance = 0.01;
  c.training.seed = c.seed;
  c.sim.seed = c.seed;
  return c;
}

ExperimentConfig parse_config(const json& doc) {
  try {
    check_keys(doc, {"plant", "leader_profile", "leader_initial", "seed", "output_dir", "topology", "control", "sim",
                     "kernel", "training", "bounds"},
               "config");
    ExperimentConfig c = default_config();
    if (doc.contains("plant")) c.plant = doc["plant"].get<std::string>();
    if (doc.contains("leader_profile")) c.leader_profile = parse_leader_profile(doc["leader_profile"].get<std::string>());
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
    const Index m = make_plant(c.plant, c.leader_profile).dim;
    if (doc.contains("leader_initial")) c.sim.leader_initial = vector_from(doc["leader_initial"], m, "leader_initial");

    if (doc.contains("topology")) parse_topology(doc["topology"], c);
    const Index n = c.adjacency ? c.adjacency->rows() : c.agents;
    c.sim.gains.assign(static_cast<std::size_t>(n), 2.0);

    if (doc.contains("control")) {
      const json& j = doc["control"];
      check_keys(j, {"mode", "gains"}, "control");
      if (j.contains("mode")) c.sim.mode = parse_control_mode(j["mode"].get<std::string>());
      if (j.contains("gains")) {
        const Vector g = vector_from(j["gains"], n, "control.gains");
        c.sim.gains.assign(g.data(), g.data() + g.size());
      }
    }
    if (doc.contains("sim")) {
      const json& j = doc["sim"];
      check_keys(j, {"dt", "horizon", "init_range", "divergence_limit"}, "sim");
      if (j.contains("dt")) c.sim.dt = j["dt"].get<double>();
      if (j.contains("horizon")) c.sim.horizon = j["horizon"].get<double>();
      if (j.contains("init_range")) c.sim.init_range = box_from(j["init_range"], m, "sim.init_range");
      if (j.contains("divergence_limit")) c.sim.divergence_limit = j["divergence_limit"].get<double>();
    }
    if (doc.contains("kernel")) {
      const json& j = doc["kernel"];
      check_keys(j, {"signal_variance", "weights", "noise_variance"}, "kernel");
      if (j.contains("signal_variance")) c.kernel.signal_variance = j["signal_variance"].get<double>();
      if (j.contains("weights")) c.kernel.weights = vector_from(j["weights"], m, "kernel.weights");
      if (j.contains("noise_variance")) c.kernel.noise_variance = j["noise_variance"].get<double>();
    }
    if (doc.contains("training")) {
      const json& j = doc["training"];
      check_keys(j, {"total", "domain", "sampling", "partition", "noise_variance"}, "training");
      if (j.contains("total")) c.training.total = j["total"].get<Index>();
      if (j.contains("domain")) c.training.domain = box_from(j["domain"], m, "training.domain");
      if (j.contains("sampling")) c.training.sampling = parse_sampling(j["sampling"].get<std::string>());
      if (j.contains("partition")) c.training.partition = parse_partition(j["partition"].get<std::string>());
      if (j.contains("noise_variance")) c.training.noise_variance = j["noise_variance"].get<double>();
    }
    if (doc.contains("bounds")) {
      const json& j = doc["bounds"];
      check_keys(j, {"rho", "delta", "grid_points", "lipschitz_f", "lipschitz_mean", "lipschitz_variance", "tail_fraction"},
                 "bounds");
      if (j.contains("rho")) c.bounds.rho = j["rho"].get<double>();
      if (j.contains("delta")) c.bounds.delta = j["delta"].get<double>();
      if (j.contains("grid_points")) c.bounds.grid_points = j["grid_points"].get<Index>();
      if (j.contains("lipschitz_f")) c.bounds.lipschitz_f = j["lipschitz_f"].get<double>();
      if (j.contains("lipschitz_mean")) c.bounds.lipschitz_mean = j["lipschitz_mean"].get<double>();
      if (j.contains("lipschitz_variance")) c.bounds.lipschitz_variance = j["lipschitz_variance"].get<double>();
      if (j.contains("tail_fraction")) c.tail_fraction = j["tail_fraction"].get<double>();
    }
    c.training.seed = c.seed;
    c.sim.seed = c.seed;
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("config: '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["plant"] = c.plant;
  j["leader_profile"] = to_string(c.leader_profile);
  if (c.sim.leader_initial) j["leader_initial"] = vector_json(*c.sim.leader_initial);
  j["seed"] = c.seed;
  if (c.output_dir) j["output_dir"] = *c.output_dir;

  json t;
  t["weighted"] = c.weighted;
  if (c.adjacency) {
    json rows = json::array();
    for (Index i = 0; i < c.adjacency->rows(); ++i) rows.push_back(vector_json(c.adjacency->row(i).transpose()));
    t["adjacency"] = rows;
  } else {
    t["agents"] = c.agents;
    json edges = json::array();
    for (const Edge& e : c.edges) {
      json edge = {e.from + 1, e.to + 1};
      if (c.weighted) edge.push_back(e.weight);
      edges.push_back(edge);
    }
    t["edges"] = edges;
  }
  json links = json::array();
  for (Index i : c.leader_links) links.push_back(i + 1);
  t["leader_links"] = links;
  j["topology"] = t;

  j["control"] = {{"mode", to_string(c.sim.mode)}, {"gains", c.sim.gains}};
  j["sim"] = {{"dt", c.sim.dt},
              {"horizon", c.sim.horizon},
              {"init_range", box_json(c.sim.init_range)},
              {"divergence_limit", c.sim.divergence_limit}};
  j["kernel"] = {{"signal_variance", c.kernel.signal_variance},
                 {"weights", vector_json(c.kernel.weights)},
                 {"noise_variance", c.kernel.noise_variance}};
  j["training"] = {{"total", c.training.total},
                   {"domain", box_json(c.training.domain)},
                   {"sampling", c.training.sampling == Sampling::Grid ? "grid" : "uniform_random"},
                   {"partition", "quadrant"},
                   {"noise_variance", c.training.noise_variance}};
  json b = {{"rho", c.bounds.rho},
            {"delta", c.bounds.delta},
            {"grid_points", c.bounds.grid_points},
            {"tail_fraction", c.tail_fraction}};
  if (c.bounds.lipschitz_f) b["lipschitz_f"] = *c.bounds.lipschitz_f;
  if (c.bounds.lipschitz_mean) b["lipschitz_mean"] = *c.bounds.lipschitz_mean;
  if (c.bounds.lipschitz_variance) b["lipschitz_variance"] = *c.bounds.lipschitz_variance;
  j["bounds"] = b;
  return j;
}

}  // namespace gpcons

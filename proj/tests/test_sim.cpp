#include <cmath>
#include <random>

#include "doctest.h"

#include "gpcons/config.hpp"
#include "gpcons/experiment.hpp"
#include "gpcons/sim.hpp"
#include "test_support.hpp"

using namespace gpcons;

namespace {

DynamicsSpec static_leader_plant() {
  DynamicsSpec s = builtin_zero_plant(LeaderProfile::Trajectory);
  s.leader = [](const Vector& x, double) { return Vector::Zero(x.size()); };
  s.leader_bound = 0.0;
  s.leader_initial = Vector::Zero(2);
  return s;
}

SimConfig short_config(ControlMode mode, double horizon) {
  SimConfig c;
  c.horizon = horizon;
  c.init_range = Box{Vector::Constant(2, -2.0), Vector::Constant(2, 2.0)};
  c.seed = 3;
  c.mode = mode;
  c.gains = {2.0, 2.0, 2.0, 2.0};
  return c;
}

}  // namespace

TEST_SUITE("sim") {

TEST_CASE("rk4 on a constant field is exact") {
  const Vector c = (Vector(2) << 1.5, -0.25).finished();
  const OdeField field = [&](const Vector&, double) { return c; };
  const Vector x0 = (Vector(2) << 0.1, 0.2).finished();
  const Vector x1 = rk4_step(field, x0, 0.0, 0.01);
  CHECK(x1 == x0 + 0.01 * c);
}

TEST_CASE("rk4 on exponential decay") {
  const OdeField field = [](const Vector& x, double) { return Vector(-x); };
  const Vector x1 = rk4_step(field, Vector::Ones(1), 0.0, 0.1);
  CHECK(std::abs(x1(0) - std::exp(-0.1)) <= 1e-7);
}

TEST_CASE("rk4 reports non-finite derivatives") {
  const OdeField field = [](const Vector& x, double) { return Vector(x.array().log()); };
  CHECK_THROWS_AS(rk4_step(field, -Vector::Ones(1), 0.0, 0.1), DivergenceError);
}

TEST_CASE("agents starting on a static leader stay there") {
  SimConfig c = short_config(ControlMode::NoLearning, 5.0);
  c.initial_states = Matrix::Zero(4, 2);
  const TrajectoryLog log = run(c, static_leader_plant(), reference_topology(), {});
  CHECK(log.steps() == 501);
  CHECK(log.errors.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(log.lyapunov.maxCoeff() <= 1e-24);
  const Containment cont = radius_monitor(log, 1e-9);
  CHECK(cont.contained);
  CHECK(cont.since_step == 0);
}

TEST_CASE("errors converge to zero without leader motion or residual") {
  const TrajectoryLog log = run(short_config(ControlMode::NoLearning, 20.0), static_leader_plant(), reference_topology(), {});
  CHECK(log.error_norm(0) > 0.1);
  CHECK(log.error_norm(log.steps() - 1) < 1e-3);
  const Containment cont = radius_monitor(log, 0.5);
  CHECK(cont.contained);
  CHECK(cont.since > 0.0);
  CHECK(lyapunov_decrease(log, 0.0).fraction() == 1.0);
}

TEST_CASE("one-step horizon logs two rows") {
  const TrajectoryLog log = run(short_config(ControlMode::NoLearning, 0.01), builtin_reference_plant(LeaderProfile::Trajectory),
                                reference_topology(), {});
  CHECK(log.steps() == 2);
  CHECK(log.time(0) == 0.0);
  CHECK(log.time(1) == 0.01);
}

TEST_CASE("logs are deterministic and thread-count independent") {
  ExperimentConfig cfg = default_config();
  cfg.sim.horizon = 5.0;
  const DynamicsSpec spec = cfg.dynamics();
  const Topology topo = cfg.topology();
  const ModelBank bank = train_models(cfg, spec, topo.size());
  SimConfig a = cfg.sim_config(ControlMode::DistributedGP);
  const TrajectoryLog l1 = run(a, spec, topo, bank.models);
  const TrajectoryLog l2 = run(a, spec, topo, bank.models);
  a.parallel = false;
  const TrajectoryLog l3 = run(a, spec, topo, bank.models);
  CHECK(l1.states == l2.states);
  CHECK(l1.controls == l2.controls);
  CHECK(l1.model_error == l2.model_error);
  CHECK(l1.states == l3.states);
  CHECK(l1.controls == l3.controls);
  CHECK(l1.lyapunov == l3.lyapunov);
}

TEST_CASE("divergence carries a partial log") {
  DynamicsSpec s = static_leader_plant();
  s.f = [](const Vector& x) -> Vector { return 5.0 * x; };
  SimConfig c = short_config(ControlMode::NoLearning, 50.0);
  c.gains = {0.1, 0.1, 0.1, 0.1};
  c.divergence_limit = 100.0;
  try {
    run(c, s, reference_topology(), {});
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    const TrajectoryLog& partial = e.partial();
    CHECK(partial.steps() > 1);
    CHECK(partial.steps() < c.steps());
    CHECK(partial.states.rows() == partial.steps());
    CHECK(std::string(e.what()).find("divergence") != std::string::npos);
  }
}

TEST_CASE("sim validation") {
  SimConfig c = short_config(ControlMode::DistributedGP, 1.0);
  CHECK_THROWS_AS(run(c, builtin_reference_plant(LeaderProfile::Trajectory), reference_topology(), {}), ValidationError);
  c.mode = ControlMode::NoLearning;
  c.dt = 0.0;
  CHECK_THROWS_AS(run(c, builtin_reference_plant(LeaderProfile::Trajectory), reference_topology(), {}), ValidationError);
  c.dt = 0.01;
  c.gains = {1.0};
  CHECK_THROWS_AS(run(c, builtin_reference_plant(LeaderProfile::Trajectory), reference_topology(), {}), ValidationError);
  c = short_config(ControlMode::NoLearning, 1.0);
  const Topology no_leader = Topology::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}, {});
  CHECK_THROWS_AS(run(c, builtin_reference_plant(LeaderProfile::Trajectory), no_leader, {}), ValidationError);
}

TEST_CASE("lyapunov function") {
  const GroundedLaplacian g = grounded_laplacian(reference_topology());
  CHECK(lyapunov(Vector::Zero(8), g, 2) == 0.0);
  const GroundedLaplacian single = grounded_laplacian(Topology(Matrix::Zero(1, 1), Vector::Ones(1)));
  CHECK(lyapunov(Vector::Constant(1, 2.0), single, 1) == 2.0);
  CHECK_THROWS_AS(lyapunov(Vector::Zero(3), g, 2), ValidationError);
}

TEST_CASE("lyapunov sandwich on random errors") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<Index> size(1, 10), dim(1, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const Topology t = testing_support::random_topology(rng, size(rng));
    const Index m = dim(rng);
    const GroundedLaplacian g = grounded_laplacian(t);
    const Vector e = testing_support::random_matrix(rng, t.size() * m, 1, -2.0, 2.0);
    const Vector xi = testing_support::stacked_grounded_product(t, e, m);
    const Vector inv_ev = testing_support::jacobi_eigenvalues(g.matrix.inverse());
    const double v2 = 2.0 * lyapunov(e, g, m);
    const double s = xi.squaredNorm();
    CHECK(v2 >= inv_ev(0) * s * (1.0 - 1e-9));
    CHECK(v2 <= inv_ev(inv_ev.size() - 1) * s * (1.0 + 1e-9));
  }
}

TEST_CASE("radius monitor") {
  TrajectoryLog log;
  log.agents = 1;
  log.dim = 1;
  log.resize(5);
  log.time << 0, 1, 2, 3, 4;
  log.errors.col(0) << 3.0, 0.5, 2.0, 0.5, 0.1;
  const Containment c = radius_monitor(log, 1.0);
  CHECK(c.contained);
  CHECK(c.since_step == 3);
  CHECK(c.since == 3.0);
  CHECK_FALSE(radius_monitor(log, 0.05).contained);
  CHECK(radius_monitor(log, 10.0).since_step == 0);
}

TEST_CASE("reference run stays near the training domain") {
  const ExperimentConfig cfg = default_config();
  const DynamicsSpec spec = cfg.dynamics();
  const Topology topo = cfg.topology();
  const ModelBank bank = train_models(cfg, spec, topo.size());
  const ModeResult r = run_mode(cfg, ControlMode::DistributedGP, spec, topo, bank);
  CHECK(max_domain_inflation(r.log, cfg.training.domain) <= 1.5);
  CHECK(r.radius > 0.0);
  const GroundedLaplacian g = grounded_laplacian(topo);
  const Vector inv_ev = testing_support::jacobi_eigenvalues(g.matrix.inverse());
  for (Index s = 0; s < r.log.steps(); s += 97) {
    const double v2 = 2.0 * r.log.lyapunov(s);
    const double xi2 = r.log.consensus.row(s).squaredNorm();
    CHECK(v2 >= inv_ev(0) * xi2 * (1.0 - 1e-9));
    CHECK(v2 <= inv_ev(3) * xi2 * (1.0 + 1e-9));
  }
}

}

#include "gpcons/sim.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <sstream>

#include "gpcons/fusion.hpp"

namespace gpcons {

Index SimConfig::steps() const { return static_cast<Index>(std::llround(horizon / dt)); }

void SimConfig::validate(Index agents, Index dim) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("sim: dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) throw ValidationError("sim: horizon must be >= dt");
  if (!(divergence_limit > 0.0)) throw ValidationError("sim: divergence_limit must be positive");
  validate_gains(gains, agents);
  if (initial_states) {
    if (initial_states->rows() != agents || initial_states->cols() != dim) {
      throw ValidationError("sim: initial_states must be agents x dim");
    }
  } else {
    init_range.validate("sim init_range");
    if (init_range.dim() != dim) throw ValidationError("sim: init_range dimension does not match the plant");
  }
  if (leader_initial && leader_initial->size() != dim) {
    throw ValidationError("sim: leader_initial dimension does not match the plant");
  }
}

void TrajectoryLog::resize(Index rows) {
  const Index block = agents * dim;
  time.conservativeResize(rows);
  leader.conservativeResize(rows, dim);
  states.conservativeResize(rows, block);
  controls.conservativeResize(rows, block);
  errors.conservativeResize(rows, block);
  consensus.conservativeResize(rows, block);
  lyapunov.conservativeResize(rows);
  accumulated.conservativeResize(rows, dim);
  model_error.conservativeResize(rows, agents);
}

Vector rk4_step(const OdeField& field, const Vector& state, double t, double dt) {
  auto eval = [&](const Vector& x, double tt) {
    Vector d = field(x, tt);
    if (!d.allFinite()) {
      std::ostringstream msg;
      msg << "non-finite derivative at t = " << tt;
      throw DivergenceError(msg.str(), TrajectoryLog{});
    }
    return d;
  };
  const Vector k1 = eval(state, t);
  const Vector k2 = eval(state + 0.5 * dt * k1, t + 0.5 * dt);
  const Vector k3 = eval(state + 0.5 * dt * k2, t + 0.5 * dt);
  const Vector k4 = eval(state + dt * k3, t + dt);
  return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double lyapunov(const Vector& stacked_error, const GroundedLaplacian& grounded, Index dim) {
  const Index n = grounded.matrix.rows();
  if (stacked_error.size() != n * dim) throw ValidationError("lyapunov: stacked error has the wrong length");
  // agent-major stacking: reshape to dim x n, then V = 0.5 tr(E L~ E')
  const Eigen::Map<const Matrix> e(stacked_error.data(), dim, n);
  return 0.5 * (e * grounded.matrix * e.transpose()).trace();
}

namespace {

struct AgentStep {
  Vector u;
  double model_error = 0.0;
};

// Prediction of the residual used by agent i's controller, or nullopt.
std::optional<Vector> agent_prediction(ControlMode mode, Index i, const Vector& xi_state,
                                       const Topology& topology, const std::vector<AgentModels>& models) {
  if (mode == ControlMode::NoLearning) return std::nullopt;
  const auto m = static_cast<Index>(models[static_cast<std::size_t>(i)].size());
  Vector out(m);
  if (mode == ControlMode::IndividualGP) {
    for (Index k = 0; k < m; ++k) out(k) = models[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].predict(xi_state).mean;
    return out;
  }
  const Index n = topology.size();
  const Matrix& a = topology.adjacency();
  std::vector<double> a_row(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) a_row[static_cast<std::size_t>(j)] = a(i, j);

  std::vector<LocalPrediction> neighbors;
  for (Index k = 0; k < m; ++k) {
    neighbors.clear();
    LocalPrediction self;
    for (Index j = 0; j < n; ++j) {
      if (j != i && a(i, j) == 0.0) continue;
      const Prediction p = models[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)].predict(xi_state);
      const LocalPrediction lp{j, k, p.mean, p.variance};
      if (j == i) {
        self = lp;
      } else {
        neighbors.push_back(lp);
      }
    }
    out(k) = fuse(self, neighbors, a_row).mean;
  }
  return out;
}

}  // namespace

TrajectoryLog run(const SimConfig& config, const DynamicsSpec& spec, const Topology& topology,
                  const std::vector<AgentModels>& models) {
  const Index n = topology.size();
  const Index m = spec.dim;
  config.validate(n, m);
  const auto check = check_assumption3(topology);
  if (!check.ok()) throw ValidationError("assumption 3 violated: " + check.diagnostic);
  if (uses_learning(config.mode)) {
    if (static_cast<Index>(models.size()) != n) throw ValidationError("sim: one model set per agent required");
    for (const auto& am : models) {
      if (static_cast<Index>(am.size()) != m) throw ValidationError("sim: one GP per output dimension required");
    }
  }
  const GroundedLaplacian grounded = grounded_laplacian(topology);

  Matrix x(n, m);
  if (config.initial_states) {
    x = *config.initial_states;
  } else {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32), 2u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < m; ++k) {
        x(i, k) = config.init_range.lower(k) + unit(rng) * config.init_range.width()(k);
      }
    }
  }
  Vector xl = config.leader_initial ? *config.leader_initial : spec.leader_initial;
  if (xl.size() != m) throw ValidationError("sim: leader initial state dimension does not match the plant");

  const Index steps = config.steps();
  TrajectoryLog log;
  log.agents = n;
  log.dim = m;
  log.resize(steps + 1);

  std::vector<AgentStep> agent(static_cast<std::size_t>(n));
  Matrix u(n, m);
  Vector stacked((n + 1) * m);

  for (Index s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * config.dt;
    const ConsensusState cs = consensus_error(x, xl, topology);

    std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (config.parallel)
    for (Index i = 0; i < n; ++i) {
      try {
        const Vector xi_state = x.row(i).transpose();
        const auto prediction = agent_prediction(config.mode, i, xi_state, topology, models);
        std::optional<Vector> f_hat;
        if (spec.f_hat) f_hat = spec.f_hat(xi_state);
        auto& out = agent[static_cast<std::size_t>(i)];
        out.u = control_input(config.mode, config.gains[static_cast<std::size_t>(i)], cs.xi.row(i).transpose(),
                              prediction, f_hat);
        Vector err = residual(spec, xi_state);
        if (prediction) err -= *prediction;
        out.model_error = err.norm();
      } catch (...) {
#pragma omp critical(gpcons_sim_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    for (Index i = 0; i < n; ++i) u.row(i) = agent[static_cast<std::size_t>(i)].u.transpose();

    log.time(s) = t;
    log.leader.row(s) = xl.transpose();
    for (Index i = 0; i < n; ++i) {
      log.states.block(s, i * m, 1, m) = x.row(i);
      log.controls.block(s, i * m, 1, m) = u.row(i);
      log.errors.block(s, i * m, 1, m) = cs.e.row(i);
      log.consensus.block(s, i * m, 1, m) = cs.xi.row(i);
      log.model_error(s, i) = agent[static_cast<std::size_t>(i)].model_error;
    }
    log.lyapunov(s) = lyapunov(log.errors.row(s).transpose(), grounded, m);
    log.accumulated.row(s) = cs.e.cwiseAbs().colwise().sum();

    if (s == steps) break;

    stacked.head(m) = xl;
    for (Index i = 0; i < n; ++i) stacked.segment((i + 1) * m, m) = x.row(i).transpose();
    const OdeField field = [&](const Vector& z, double tt) {
      Vector d(z.size());
      d.head(m) = spec.leader(z.head(m), tt);
      for (Index i = 0; i < n; ++i) {
        const Vector xi_state = z.segment((i + 1) * m, m);
        d.segment((i + 1) * m, m) = spec.f(xi_state) + spec.h(xi_state) + u.row(i).transpose();
      }
      return d;
    };

    Vector next;
    try {
      next = rk4_step(field, stacked, t, config.dt);
    } catch (const DivergenceError& e) {
      log.resize(s + 1);
      throw DivergenceError(e.what(), std::move(log));
    }
    if (!next.allFinite() || next.cwiseAbs().maxCoeff() > config.divergence_limit) {
      log.resize(s + 1);
      std::ostringstream msg;
      msg << "divergence: state magnitude exceeded " << config.divergence_limit << " at t = "
          << static_cast<double>(s + 1) * config.dt;
      throw DivergenceError(msg.str(), std::move(log));
    }
    xl = next.head(m);
    for (Index i = 0; i < n; ++i) x.row(i) = next.segment((i + 1) * m, m).transpose();
  }
  return log;
}

Containment radius_monitor(const TrajectoryLog& log, double radius) {
  Containment out;
  const Index steps = log.steps();
  if (steps == 0) return out;
  Index first = steps;
  for (Index s = steps - 1; s >= 0; --s) {
    if (log.error_norm(s) > radius) break;
    first = s;
  }
  if (first < steps) {
    out.contained = true;
    out.since_step = first;
    out.since = log.time(first);
  }
  return out;
}

double trajectory_tail_nu(const TrajectoryLog& log, double leader_bound, double tail_fraction) {
  const Index steps = log.steps();
  if (steps == 0) return 0.0;
  const auto start = static_cast<Index>(std::floor((1.0 - tail_fraction) * static_cast<double>(steps - 1)));
  double sup = 0.0;
  for (Index s = start; s < steps; ++s) {
    const Vector norms = log.model_error.row(s).transpose();
    sup = std::max(sup, theorem1_nu(leader_bound, norms));
  }
  return sup;
}

DecreaseReport lyapunov_decrease(const TrajectoryLog& log, double radius) {
  DecreaseReport out;
  for (Index s = 0; s + 1 < log.steps(); ++s) {
    if (log.error_norm(s) <= radius) continue;
    ++out.outside;
    if (log.lyapunov(s + 1) < log.lyapunov(s)) ++out.decreasing;
  }
  return out;
}

Vector tail_mean_accumulated(const TrajectoryLog& log, double tail_fraction) {
  const Index steps = log.steps();
  if (steps == 0) return Vector::Zero(log.dim);
  const auto start = static_cast<Index>(std::floor((1.0 - tail_fraction) * static_cast<double>(steps - 1)));
  return log.accumulated.bottomRows(steps - start).colwise().mean().transpose();
}

double max_domain_inflation(const TrajectoryLog& log, const Box& domain) {
  const Vector c = domain.center();
  const Vector half = 0.5 * domain.width();
  double worst = 0.0;
  for (Index s = 0; s < log.steps(); ++s) {
    for (Index k = 0; k < log.dim; ++k) {
      worst = std::max(worst, std::abs(log.leader(s, k) - c(k)) / half(k));
      for (Index i = 0; i < log.agents; ++i) {
        worst = std::max(worst, std::abs(log.states(s, i * log.dim + k) - c(k)) / half(k));
      }
    }
  }
  return worst;
}

}  // namespace gpcons

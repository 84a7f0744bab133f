#include "gpcons/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gpcons/control.hpp"
#include "gpcons/fusion.hpp"
#include "gpcons/kernels.hpp"

namespace gpcons {

void BoundSettings::validate() const {
  if (!(rho > 0.0)) throw ValidationError("bounds: rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("bounds: delta must lie in (0, 1)");
  if (grid_points < 2) throw ValidationError("bounds: grid_points must be >= 2");
  for (const auto& o : {lipschitz_f, lipschitz_mean, lipschitz_variance}) {
    if (o && !(*o >= 0.0)) throw ValidationError("bounds: Lipschitz overrides must be >= 0");
  }
}

void BoundReport::set_trajectory_nu(double nu) {
  nu_trajectory_tail = nu;
  radius_trajectory_tail = theorem1_radius(nu, k_star, lambda_min);
}

BoundReport build_bound_report(const DynamicsSpec& spec, const Topology& topology,
                               const std::vector<AgentModels>& models, const Box& domain,
                               const BoundSettings& settings, const std::vector<double>& gains) {
  settings.validate();
  domain.validate("bound domain");
  const Index n = topology.size();
  const Index m = spec.dim;
  if (domain.dim() != m) throw ValidationError("bound domain dimension does not match the plant");
  if (static_cast<Index>(models.size()) != n) throw ValidationError("bounds: one model set per agent required");
  validate_gains(gains, n);

  BoundReport r;
  r.agents = n;
  r.dim = m;
  r.rho = settings.rho;
  r.delta = settings.delta;
  r.r_omega = domain.diameter();
  r.beta = beta(settings.rho, settings.delta, m, n, r.r_omega);
  r.probability = std::pow(1.0 - settings.delta, static_cast<double>(m));

  const GroundedLaplacian grounded = grounded_laplacian(topology);
  r.lambda_min = grounded.lambda_min;
  r.k_star = *std::min_element(gains.begin(), gains.end());
  r.leader_bound = spec.leader_bound;

  const Grid grid(domain, settings.grid_points);
  const Matrix points = grid.points();
  const Index g = grid.size();
  r.grid_spacing = Vector(m);
  for (Index k = 0; k < m; ++k) r.grid_spacing(k) = grid.spacing(k);

  // residual on the grid, one row per output
  Matrix tau(m, g);
#pragma omp parallel for schedule(static)
  for (Index p = 0; p < g; ++p) tau.col(p) = residual(spec, points.row(p).transpose());

  r.lipschitz_f = settings.lipschitz_f ? Vector::Constant(m, *settings.lipschitz_f)
                                       : kernels::omp::max_gradient_norm(tau, grid);

  // every local model on the grid
  std::vector<std::vector<kernels::BatchPrediction>> local(static_cast<std::size_t>(n));
  r.lipschitz_mean.resize(n, m);
  r.lipschitz_variance.resize(n, m);
  for (Index j = 0; j < n; ++j) {
    const auto& am = models[static_cast<std::size_t>(j)];
    if (static_cast<Index>(am.size()) != m) throw ValidationError("bounds: one GP per output dimension required");
    for (Index k = 0; k < m; ++k) {
      local[static_cast<std::size_t>(j)].push_back(kernels::omp::predict_batch(am[static_cast<std::size_t>(k)], points));
      const auto& bp = local[static_cast<std::size_t>(j)].back();
      Matrix both(2, g);
      both.row(0) = bp.mean.transpose();
      both.row(1) = bp.variance.transpose();
      const Vector slopes = kernels::omp::max_gradient_norm(both, grid);
      r.lipschitz_mean(j, k) = settings.lipschitz_mean.value_or(slopes(0));
      r.lipschitz_variance(j, k) = settings.lipschitz_variance.value_or(slopes(1));
    }
  }

  r.gamma.resize(n, m);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < m; ++k) {
      r.gamma(j, k) = gamma(settings.rho, r.beta, r.lipschitz_f(k), r.lipschitz_mean(j, k), r.lipschitz_variance(j, k));
    }
  }

  r.grid_max_bound = Matrix::Zero(n, m);
  r.grid_max_error = Matrix::Zero(n, m);
  Vector sup_bound_norm2 = Vector::Zero(n);
  Vector sup_error_norm2 = Vector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<double> a_row(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) a_row[static_cast<std::size_t>(j)] = topology.a(i, j);
    std::vector<BoundParams> params(static_cast<std::size_t>(m));
    for (Index k = 0; k < m; ++k) {
      auto& bp = params[static_cast<std::size_t>(k)];
      bp.rho = settings.rho;
      bp.delta = settings.delta;
      bp.r_omega = r.r_omega;
      bp.beta = r.beta;
      for (Index j = 0; j < n; ++j) bp.gamma.push_back(r.gamma(j, k));
    }

    Matrix bound(m, g);
    Matrix error(m, g);
#pragma omp parallel for schedule(static)
    for (Index p = 0; p < g; ++p) {
      std::vector<LocalPrediction> locals(static_cast<std::size_t>(n));
      for (Index k = 0; k < m; ++k) {
        for (Index j = 0; j < n; ++j) {
          const auto& bp = local[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
          locals[static_cast<std::size_t>(j)] = {j, k, bp.mean(p), bp.variance(p)};
        }
        const FusedPrediction fused = fuse(locals[static_cast<std::size_t>(i)], locals, a_row);
        bound(k, p) = pointwise_bound(fused, locals, params[static_cast<std::size_t>(k)]);
        error(k, p) = std::abs(tau(k, p) - fused.mean);
      }
    }
    r.grid_max_bound.row(i) = bound.rowwise().maxCoeff().transpose();
    r.grid_max_error.row(i) = error.rowwise().maxCoeff().transpose();
    sup_bound_norm2(i) = bound.colwise().squaredNorm().maxCoeff();
    sup_error_norm2(i) = error.colwise().squaredNorm().maxCoeff();
  }

  const double leader2 = static_cast<double>(n) * r.leader_bound * r.leader_bound;
  r.nu_grid_bound = leader2 + sup_bound_norm2.sum();
  r.nu_grid_measured = leader2 + sup_error_norm2.sum();
  r.radius_grid_bound = theorem1_radius(r.nu_grid_bound, r.k_star, r.lambda_min);
  r.radius_grid_measured = theorem1_radius(r.nu_grid_measured, r.k_star, r.lambda_min);
  return r;
}

namespace {

nlohmann::json matrix_json(const Matrix& mat) {
  auto out = nlohmann::json::array();
  for (Index i = 0; i < mat.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (Index k = 0; k < mat.cols(); ++k) row.push_back(mat(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

nlohmann::json vector_json(const Vector& v) {
  auto out = nlohmann::json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

}  // namespace

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j;
  j["agents"] = r.agents;
  j["dim"] = r.dim;
  j["beta"] = r.beta;
  j["gamma"] = matrix_json(r.gamma);
  j["probability"] = r.probability;
  j["grid_max_bound"] = matrix_json(r.grid_max_bound);
  j["grid_max_error"] = matrix_json(r.grid_max_error);
  j["lipschitz"] = {{"f", vector_json(r.lipschitz_f)},
                    {"mean", matrix_json(r.lipschitz_mean)},
                    {"variance", matrix_json(r.lipschitz_variance)},
                    {"grid_spacing", vector_json(r.grid_spacing)}};
  j["radius_inputs"] = {{"rho", r.rho},
                        {"delta", r.delta},
                        {"r_omega", r.r_omega},
                        {"lambda_min", r.lambda_min},
                        {"k_star", r.k_star},
                        {"leader_bound", r.leader_bound}};
  nlohmann::json nu = {{"grid_bound", r.nu_grid_bound}, {"grid_measured", r.nu_grid_measured}};
  nlohmann::json radius = {{"grid_bound", r.radius_grid_bound}, {"grid_measured", r.radius_grid_measured}};
  if (r.nu_trajectory_tail) {
    nu["trajectory_tail"] = *r.nu_trajectory_tail;
    radius["trajectory_tail"] = *r.radius_trajectory_tail;
  }
  j["nu"] = nu;
  j["radius"] = radius;
  return j;
}

}  // namespace gpcons

#include "gpcons/fusion.hpp"

#include <cmath>

namespace gpcons {
namespace {

void check_variance(const LocalPrediction& p) {
  if (!std::isfinite(p.variance) || !(p.variance > 0.0)) {
    throw ValidationError("fuse: agent " + std::to_string(p.agent + 1) + " reported non-positive variance");
  }
  if (!std::isfinite(p.mean)) throw ValidationError("fuse: non-finite mean");
}

}  // namespace

FusedPrediction fuse(const LocalPrediction& self, std::span<const LocalPrediction> neighbors,
                     std::span<const double> a_row) {
  const auto n = a_row.size();
  if (self.agent < 0 || static_cast<std::size_t>(self.agent) >= n) {
    throw ValidationError("fuse: own agent id outside the adjacency row");
  }
  check_variance(self);

  FusedPrediction out;
  out.weights.assign(n, 0.0);
  const double own = 1.0 / self.variance;
  out.precision = own;
  double weighted_mean = own * self.mean;

  for (const LocalPrediction& p : neighbors) {
    if (p.agent == self.agent) continue;
    if (p.agent < 0 || static_cast<std::size_t>(p.agent) >= n) throw ValidationError("fuse: unknown neighbor id");
    if (p.dim != self.dim) throw ValidationError("fuse: neighbor prediction for a different output dimension");
    const double a = a_row[static_cast<std::size_t>(p.agent)];
    if (a == 0.0) continue;
    check_variance(p);
    const double prec = a / p.variance;
    out.precision += prec;
    weighted_mean += prec * p.mean;
    out.weights[static_cast<std::size_t>(p.agent)] = prec;
  }

  out.weights[static_cast<std::size_t>(self.agent)] = own;
  for (double& w : out.weights) w /= out.precision;
  out.mean = weighted_mean / out.precision;
  return out;
}

double beta(double rho, double delta, Index input_dim, Index agents, double r_omega) {
  if (!(rho > 0.0)) throw ValidationError("beta: rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("beta: delta must lie in (0, 1)");
  if (input_dim < 1 || agents < 1) throw ValidationError("beta: dimension and agent count must be positive");
  if (!(r_omega > 0.0)) throw ValidationError("beta: domain diameter must be positive");
  const double m = static_cast<double>(input_dim);
  const double ratio = r_omega * std::sqrt(m) / (2.0 * rho);
  if (ratio < 1.0) {
    throw ValidationError("beta: covering argument r_omega*sqrt(m)/(2 rho) = " + std::to_string(ratio) +
                          " < 1, bound is vacuous; choose a smaller rho");
  }
  return 2.0 * m * std::log(ratio) + 2.0 * std::log(static_cast<double>(agents)) - 2.0 * std::log(delta);
}

double gamma(double rho, double beta_value, double lipschitz_f, double lipschitz_mean,
             double lipschitz_variance) {
  if (rho < 0.0 || beta_value < 0.0 || lipschitz_f < 0.0 || lipschitz_mean < 0.0 || lipschitz_variance < 0.0) {
    throw ValidationError("gamma: inputs must be non-negative");
  }
  return (lipschitz_f + lipschitz_mean) * rho + std::sqrt(beta_value * lipschitz_variance * rho);
}

void BoundParams::validate() const {
  if (!(rho > 0.0)) throw ValidationError("bounds: rho must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("bounds: delta must lie in (0, 1)");
  if (!(r_omega > 0.0)) throw ValidationError("bounds: r_omega must be positive");
  for (double g : gamma) {
    if (!(g >= 0.0)) throw ValidationError("bounds: gamma must be non-negative");
  }
}

double pointwise_bound(const FusedPrediction& fused, std::span<const LocalPrediction> locals,
                       const BoundParams& params) {
  if (locals.size() != fused.weights.size() || params.gamma.size() != fused.weights.size()) {
    throw ValidationError("pointwise_bound: locals, gamma and weights must all be indexed by agent");
  }
  const double root_beta = std::sqrt(params.beta);
  double total = 0.0;
  for (std::size_t j = 0; j < fused.weights.size(); ++j) {
    const double w = fused.weights[j];
    if (w == 0.0) continue;
    total += w * (root_beta * std::sqrt(locals[j].variance) + params.gamma[j]);
  }
  return total;
}

namespace {

LipschitzEstimate scan_scalar(const ScalarField& field, const Grid& grid) {
  const kernels::Field adapter = [&field](const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out) {
    out(0) = field(x);
  };
  const auto scan = kernels::omp::lipschitz_scan(adapter, 1, grid);
  return {scan.slopes(0), scan.spacing};
}

}  // namespace

LipschitzEstimate estimate_lipschitz(const ScalarField& field, const Box& domain, Index points_per_axis) {
  return scan_scalar(field, Grid(domain, points_per_axis));
}

LipschitzEstimate estimate_lipschitz_spacing(const ScalarField& field, const Box& domain, double spacing) {
  return scan_scalar(field, Grid::with_spacing(domain, spacing));
}

}  // namespace gpcons

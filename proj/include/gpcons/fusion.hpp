#pragma once

#include <span>
#include <vector>

#include "gpcons/common.hpp"
#include "gpcons/kernels.hpp"

namespace gpcons {

/// One agent's posterior for output dimension `dim`, evaluated at the
/// querying agent's state.
struct LocalPrediction {
  Index agent = 0;
  Index dim = 0;
  double mean = 0.0;
  double variance = 1.0;
};

struct FusedPrediction {
  double mean = 0.0;
  double precision = 0.0;
  /// Indexed by agent id; zero for agents that did not contribute.
  std::vector<double> weights;

  double variance() const { return 1.0 / precision; }
};

/// Precision-weighted fusion of an agent's own prediction with its
/// neighbors'. Neighbor j enters with weight a_row[j] / variance_j; entries
/// of `neighbors` whose a_row entry is zero (or that repeat `self`) are
/// ignored. Throws ValidationError on a non-positive or non-finite variance.
FusedPrediction fuse(const LocalPrediction& self, std::span<const LocalPrediction> neighbors,
                     std::span<const double> a_row);

/// Covering-number confidence scale
///   2 m log(r_omega sqrt(m) / (2 rho)) + 2 log(n) - 2 log(delta),
/// with the domain overapproximated by a hypercube of edge r_omega.
/// Throws ValidationError when r_omega sqrt(m) / (2 rho) < 1.
double beta(double rho, double delta, Index input_dim, Index agents, double r_omega);

/// (L_f + L_mu) rho + sqrt(beta L_sigma2 rho).
double gamma(double rho, double beta_value, double lipschitz_f, double lipschitz_mean,
             double lipschitz_variance);

struct BoundParams {
  double rho = 0.1;
  double delta = 0.05;
  double r_omega = 1.0;
  double beta = 0.0;
  /// gamma per contributing agent j, same indexing as the fusion weights.
  std::vector<double> gamma;

  void validate() const;
};

/// sum_j w_j (sqrt(beta) sigma_j + gamma_j) with the weights from fuse().
/// `locals` is indexed by agent id like `fused.weights`.
double pointwise_bound(const FusedPrediction& fused, std::span<const LocalPrediction> locals,
                       const BoundParams& params);

struct LipschitzEstimate {
  double value = 0.0;
  Vector spacing;
};

using ScalarField = std::function<double(const Eigen::Ref<const Vector>&)>;

/// Max forward-difference gradient norm over a uniform grid on `domain`.
LipschitzEstimate estimate_lipschitz(const ScalarField& field, const Box& domain, Index points_per_axis);
LipschitzEstimate estimate_lipschitz_spacing(const ScalarField& field, const Box& domain, double spacing);

}  // namespace gpcons

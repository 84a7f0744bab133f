#pragma once

#include <vector>

#include <Eigen/Cholesky>

#include "gpcons/common.hpp"

namespace gpcons {

/// Squared-exponential kernel hyperparameters:
/// k(x, x') = signal_variance * exp(-0.5 * sum_i weights_i (x_i - x'_i)^2).
/// The weights are inverse squared length scales.
struct KernelParams {
  double signal_variance = 1.0;
  Vector weights;
  double noise_variance = 0.01;

  /// Unit weights on every input axis.
  static KernelParams defaults(Index input_dim);
  void validate(Index input_dim) const;
};

double kernel_eval(const KernelParams& params, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x2);

/// M noisy observations of one scalar function; inputs are rows.
struct Dataset {
  Matrix inputs;   // M x m
  Vector outputs;  // M

  static Dataset empty(Index input_dim) { return {Matrix(0, input_dim), Vector(0)}; }
  Index size() const { return inputs.rows(); }
  Index input_dim() const { return inputs.cols(); }
  void validate() const;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact GP posterior with a cached Cholesky factor of K + noise * I.
/// Immutable after fit(); predict() is safe to call concurrently.
class GPModel {
 public:
  Prediction predict(const Eigen::Ref<const Vector>& x) const;

  const KernelParams& params() const { return params_; }
  const Dataset& data() const { return data_; }
  Index input_dim() const { return data_.input_dim(); }
  /// Lower-triangular factor of K + (noise + jitter) I.
  const Matrix& factor() const { return factor_; }
  /// (K + noise I)^{-1} Y.
  const Vector& alpha() const { return alpha_; }
  /// Diagonal jitter that was needed on top of the noise variance (0 if none).
  double jitter() const { return jitter_; }

  /// Clamp a raw posterior variance into (0, signal_variance].
  double clamp_variance(double raw) const;

 private:
  friend GPModel fit(Dataset data, KernelParams params);
  KernelParams params_;
  Dataset data_;
  Matrix factor_;
  Vector alpha_;
  double jitter_ = 0.0;
};

/// Factorizes K + noise * I. On failure adds jitter 1e-10, escalating by 10x
/// up to 1e-6, then throws NumericalError carrying a condition estimate.
GPModel fit(Dataset data, KernelParams params);

inline Prediction predict(const GPModel& model, const Eigen::Ref<const Vector>& x) {
  return model.predict(x);
}

/// One scalar GP per output dimension, all trained on the same agent's data.
using AgentModels = std::vector<GPModel>;

}  // namespace gpcons

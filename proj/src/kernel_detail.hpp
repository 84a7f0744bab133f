#pragma once

// Per-element arithmetic shared by GPModel::predict and the batch kernels so
// that single and batched queries agree bit for bit.

#include <cmath>

#include "gpcons/gp.hpp"

namespace gpcons::detail {

inline double sq_exp(const KernelParams& p, const double* x, const double* x2, Index stride_x,
                     Index stride_x2, Index dim) {
  double acc = 0.0;
  for (Index k = 0; k < dim; ++k) {
    const double d = x[k * stride_x] - x2[k * stride_x2];
    acc += p.weights(k) * d * d;
  }
  return p.signal_variance * std::exp(-0.5 * acc);
}

/// Fills `kx` with k(x, X_i) and returns the posterior at x.
inline Prediction predict_one(const GPModel& model, const Eigen::Ref<const Vector>& x, Vector& kx) {
  const Index n = model.data().size();
  const double prior = model.params().signal_variance;
  if (n == 0) return {0.0, prior};
  const Matrix& inputs = model.data().inputs;
  kx.resize(n);
  for (Index i = 0; i < n; ++i) {
    kx(i) = sq_exp(model.params(), x.data(), inputs.data() + i, x.innerStride(), inputs.outerStride(),
                   model.input_dim());
  }
  const double mean = kx.dot(model.alpha());
  model.factor().triangularView<Eigen::Lower>().solveInPlace(kx);
  return {mean, model.clamp_variance(prior - kx.squaredNorm())};
}

}  // namespace gpcons::detail

#include "gpcons/gp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gpcons/kernels.hpp"
#include "kernel_detail.hpp"

namespace gpcons {

KernelParams KernelParams::defaults(Index input_dim) {
  KernelParams p;
  p.weights = Vector::Ones(input_dim);
  return p;
}

void KernelParams::validate(Index input_dim) const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(signal_variance)) throw ValidationError("kernel signal_variance must be finite and > 0");
  if (!positive(noise_variance)) throw ValidationError("kernel noise_variance must be finite and > 0");
  if (weights.size() != input_dim) {
    throw ValidationError("kernel weights: expected " + std::to_string(input_dim) + " entries, got " +
                          std::to_string(weights.size()));
  }
  for (Index k = 0; k < weights.size(); ++k) {
    if (!positive(weights(k))) throw ValidationError("kernel weights must be finite and > 0");
  }
}

double kernel_eval(const KernelParams& params, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& x2) {
  if (x.size() != x2.size() || x.size() != params.weights.size()) {
    throw ValidationError("kernel_eval: dimension mismatch");
  }
  return detail::sq_exp(params, x.data(), x2.data(), x.innerStride(), x2.innerStride(), x.size());
}

void Dataset::validate() const {
  if (outputs.size() != inputs.rows()) throw ValidationError("dataset: one output per input row required");
  if (!inputs.allFinite() || !outputs.allFinite()) throw ValidationError("dataset contains non-finite values");
}

double GPModel::clamp_variance(double raw) const {
  // Cancellation in k(x,x) - v'v can leave a tiny or negative residue.
  const double floor = params_.signal_variance * std::numeric_limits<double>::epsilon();
  return std::min(params_.signal_variance, std::max(raw, floor));
}

Prediction GPModel::predict(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != input_dim()) throw ValidationError("predict: query dimension mismatch");
  Vector scratch;
  return detail::predict_one(*this, x, scratch);
}

GPModel fit(Dataset data, KernelParams params) {
  data.validate();
  params.validate(data.input_dim());

  GPModel model;
  model.params_ = std::move(params);
  model.data_ = std::move(data);
  const Index n = model.data_.size();
  if (n == 0) return model;

  Matrix k = kernels::omp::gram(model.params_, model.data_.inputs);
  k.diagonal().array() += model.params_.noise_variance;

  Eigen::LLT<Matrix> llt(k);
  double jitter = 0.0;
  for (double next = 1e-10; llt.info() != Eigen::Success; next *= 10.0) {
    if (next > 1e-6 * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "GP fit: Cholesky failed with jitter up to 1e-6 (M = " << n
          << ", reciprocal condition estimate " << k.ldlt().rcond() << ")";
      throw NumericalError(msg.str());
    }
    Matrix jittered = k;
    jittered.diagonal().array() += next;
    llt.compute(jittered);
    jitter = next;
  }
  model.jitter_ = jitter;
  model.factor_ = llt.matrixL();
  model.alpha_ = llt.solve(model.data_.outputs);
  return model;
}

}  // namespace gpcons

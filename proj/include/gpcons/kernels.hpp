#pragma once

// Data-parallel building blocks. Every kernel exists twice with identical
// signatures: `serial` is the plain reference loop, `omp` the OpenMP version.
// The two produce bit-identical results because each output element is
// computed by the same arithmetic in the same order; only the distribution of
// elements over threads differs.

#include <functional>

#include "gpcons/common.hpp"
#include "gpcons/gp.hpp"

namespace gpcons::kernels {

struct BatchPrediction {
  Vector mean;
  Vector variance;
};

/// Vector-valued field on R^m with a fixed number of outputs. Must be pure:
/// the OpenMP kernels call it from several threads.
using Field = std::function<void(const Eigen::Ref<const Vector>& x, Eigen::Ref<Vector> out)>;

struct LipschitzScan {
  Vector slopes;  // max gradient norm per field output
  Vector spacing; // grid spacing per axis
};

namespace serial {
/// K(X) with K_ij = k(x_i, x_j); X has one point per row.
Matrix gram(const KernelParams& params, const Matrix& inputs);
/// M x Q cross-covariance between training inputs and query points.
Matrix cross_covariance(const KernelParams& params, const Matrix& inputs, const Matrix& queries);
BatchPrediction predict_batch(const GPModel& model, const Matrix& queries);
/// Max over grid points of the forward-difference gradient norm of each row
/// of `values` (outputs x grid.size(), columns in grid order).
Vector max_gradient_norm(const Matrix& values, const Grid& grid);
/// Evaluates `field` on the grid, then max_gradient_norm.
LipschitzScan lipschitz_scan(const Field& field, Index outputs, const Grid& grid);
}  // namespace serial

namespace omp {
Matrix gram(const KernelParams& params, const Matrix& inputs);
Matrix cross_covariance(const KernelParams& params, const Matrix& inputs, const Matrix& queries);
BatchPrediction predict_batch(const GPModel& model, const Matrix& queries);
Vector max_gradient_norm(const Matrix& values, const Grid& grid);
LipschitzScan lipschitz_scan(const Field& field, Index outputs, const Grid& grid);
}  // namespace omp

}  // namespace gpcons::kernels

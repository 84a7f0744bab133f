#include "gpcons/kernels.hpp"

#include <cmath>

#include "kernel_detail.hpp"

namespace gpcons::kernels {
namespace {

template <bool Parallel>
Matrix gram_impl(const KernelParams& p, const Matrix& x) {
  const Index n = x.rows();
  const Index dim = x.cols();
  Matrix k(n, n);
#pragma omp parallel for schedule(dynamic, 16) if (Parallel)
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double v = detail::sq_exp(p, x.data() + i, x.data() + j, x.outerStride(), x.outerStride(), dim);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

template <bool Parallel>
Matrix cross_impl(const KernelParams& p, const Matrix& x, const Matrix& q) {
  if (x.cols() != q.cols()) throw ValidationError("cross_covariance: dimension mismatch");
  const Index dim = x.cols();
  Matrix k(x.rows(), q.rows());
#pragma omp parallel for schedule(static) if (Parallel)
  for (Index j = 0; j < q.rows(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      k(i, j) = detail::sq_exp(p, x.data() + i, q.data() + j, x.outerStride(), q.outerStride(), dim);
    }
  }
  return k;
}

template <bool Parallel>
BatchPrediction predict_impl(const GPModel& model, const Matrix& q) {
  if (q.cols() != model.input_dim()) throw ValidationError("predict_batch: query dimension mismatch");
  BatchPrediction out{Vector(q.rows()), Vector(q.rows())};
#pragma omp parallel if (Parallel)
  {
    Vector scratch;
    Vector x(q.cols());
#pragma omp for schedule(static)
    for (Index j = 0; j < q.rows(); ++j) {
      x = q.row(j).transpose();
      const Prediction p = detail::predict_one(model, x, scratch);
      out.mean(j) = p.mean;
      out.variance(j) = p.variance;
    }
  }
  return out;
}

template <bool Parallel>
Vector gradient_impl(const Matrix& values, const Grid& grid) {
  const Index n = grid.size();
  const Index dim = grid.dim();
  if (values.cols() != n) throw ValidationError("max_gradient_norm: one column per grid point required");

  std::vector<Index> stride(static_cast<std::size_t>(dim));
  Index s = 1;
  for (Index k = 0; k < dim; ++k) {
    stride[static_cast<std::size_t>(k)] = s;
    s *= grid.points_per_axis()[static_cast<std::size_t>(k)];
  }
  Vector spacing(dim);
  for (Index k = 0; k < dim; ++k) spacing(k) = grid.spacing(k);

  Vector slopes = Vector::Zero(values.rows());
  for (Index o = 0; o < values.rows(); ++o) {
    double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best) if (Parallel)
    for (Index p = 0; p < n; ++p) {
      double g2 = 0.0;
      Index rest = p;
      for (Index k = 0; k < dim; ++k) {
        const Index c = grid.points_per_axis()[static_cast<std::size_t>(k)];
        const Index idx = rest % c;
        rest /= c;
        const Index st = stride[static_cast<std::size_t>(k)];
        // forward difference, backward on the upper face
        const Index a = idx + 1 < c ? p : p - st;
        const double d = (values(o, a + st) - values(o, a)) / spacing(k);
        g2 += d * d;
      }
      best = std::max(best, std::sqrt(g2));
    }
    slopes(o) = best;
  }
  return slopes;
}

template <bool Parallel>
LipschitzScan lipschitz_impl(const Field& field, Index outputs, const Grid& grid) {
  const Index n = grid.size();
  Matrix values(outputs, n);
  bool finite = true;

#pragma omp parallel if (Parallel)
  {
    Vector out(outputs);
#pragma omp for schedule(static) reduction(&& : finite)
    for (Index p = 0; p < n; ++p) {
      field(grid.point(p), out);
      finite = finite && out.allFinite();
      values.col(p) = out;
    }
  }
  if (!finite) throw NumericalError("lipschitz scan: field returned non-finite values");

  LipschitzScan scan{gradient_impl<Parallel>(values, grid), Vector(grid.dim())};
  for (Index k = 0; k < grid.dim(); ++k) scan.spacing(k) = grid.spacing(k);
  return scan;
}

}  // namespace

namespace serial {
Matrix gram(const KernelParams& p, const Matrix& x) { return gram_impl<false>(p, x); }
Matrix cross_covariance(const KernelParams& p, const Matrix& x, const Matrix& q) { return cross_impl<false>(p, x, q); }
BatchPrediction predict_batch(const GPModel& m, const Matrix& q) { return predict_impl<false>(m, q); }
Vector max_gradient_norm(const Matrix& v, const Grid& g) { return gradient_impl<false>(v, g); }
LipschitzScan lipschitz_scan(const Field& f, Index outputs, const Grid& g) { return lipschitz_impl<false>(f, outputs, g); }
}  // namespace serial

namespace omp {
Matrix gram(const KernelParams& p, const Matrix& x) { return gram_impl<true>(p, x); }
Matrix cross_covariance(const KernelParams& p, const Matrix& x, const Matrix& q) { return cross_impl<true>(p, x, q); }
BatchPrediction predict_batch(const GPModel& m, const Matrix& q) { return predict_impl<true>(m, q); }
Vector max_gradient_norm(const Matrix& v, const Grid& g) { return gradient_impl<true>(v, g); }
LipschitzScan lipschitz_scan(const Field& f, Index outputs, const Grid& g) { return lipschitz_impl<true>(f, outputs, g); }
}  // namespace omp

}  // namespace gpcons::kernels

#pragma once

// Independent reference implementations used as test oracles. None of these
// call into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gpcons/common.hpp"
#include "gpcons/gp.hpp"
#include "gpcons/topology.hpp"

namespace testing_support {

using gpcons::Index;
using gpcons::Matrix;
using gpcons::Vector;

// Cyclic Jacobi rotations; returns eigenvalues in ascending order.
inline Vector jacobi_eigenvalues(Matrix a, int sweeps = 100) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev = a.diagonal();
  std::sort(ev.data(), ev.data() + n);
  return ev;
}

inline double se_kernel(double sr2, const Vector& w, const Vector& x, const Vector& y) {
  double s = 0.0;
  for (Index k = 0; k < x.size(); ++k) s += w(k) * (x(k) - y(k)) * (x(k) - y(k));
  return sr2 * std::exp(-0.5 * s);
}

struct OraclePrediction {
  double mean;
  double variance;
};

// Posterior by a full-pivoting LU direct solve, no factor caching.
inline OraclePrediction gp_oracle(const gpcons::KernelParams& p, const Matrix& X, const Vector& y, const Vector& x) {
  const Index n = X.rows();
  if (n == 0) return {0.0, p.signal_variance};
  Matrix K(n, n);
  Vector k(n);
  for (Index i = 0; i < n; ++i) {
    k(i) = se_kernel(p.signal_variance, p.weights, X.row(i).transpose(), x);
    for (Index j = 0; j < n; ++j) K(i, j) = se_kernel(p.signal_variance, p.weights, X.row(i).transpose(), X.row(j).transpose());
    K(i, i) += p.noise_variance;
  }
  Eigen::FullPivLU<Matrix> lu(K);
  const Vector a = lu.solve(y);
  const Vector v = lu.solve(k);
  return {k.dot(a), p.signal_variance - k.dot(v)};
}

// Random connected graph: a random spanning tree plus extra edges, with at
// least one leader link.
inline gpcons::Topology random_topology(std::mt19937_64& rng, Index n, double extra_edge_prob = 0.3) {
  Matrix A = Matrix::Zero(n, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 1; k < n; ++k) {
    std::uniform_int_distribution<Index> pick(0, k - 1);
    const Index u = order[static_cast<std::size_t>(k)];
    const Index v = order[static_cast<std::size_t>(pick(rng))];
    A(u, v) = A(v, u) = 1.0;
  }
  std::bernoulli_distribution extra(extra_edge_prob);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (extra(rng)) A(i, j) = A(j, i) = 1.0;
  Vector b = Vector::Zero(n);
  std::bernoulli_distribution link(0.3);
  for (Index i = 0; i < n; ++i) b(i) = link(rng) ? 1.0 : 0.0;
  if (b.sum() == 0.0) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    b(pick(rng)) = 1.0;
  }
  return gpcons::Topology(A, b);
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

// xi_i = sum_j a_ij (e_i - e_j) + b_i e_i, written out by hand.
inline Vector stacked_grounded_product(const gpcons::Topology& t, const Vector& e, Index m) {
  const Index n = t.size();
  Matrix Lt = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      Lt(i, j) = -t.a(i, j);
      Lt(i, i) += t.a(i, j);
    }
    Lt(i, i) += t.b(i);
  }
  Matrix kron = Matrix::Zero(n * m, n * m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) kron.block(i * m, j * m, m, m) = Lt(i, j) * Matrix::Identity(m, m);
  return kron * e;
}

}  // namespace testing_support

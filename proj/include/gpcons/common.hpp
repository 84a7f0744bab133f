#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gpcons {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Input violates a documented invariant. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failure, non-finite intermediate values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Axis-aligned hyper-rectangle [lower, upper].
struct Box {
  Vector lower;
  Vector upper;

  Index dim() const { return lower.size(); }
  Vector center() const { return 0.5 * (lower + upper); }
  Vector width() const { return upper - lower; }
  /// Euclidean diameter, max ||x - x'|| over the box.
  double diameter() const { return (upper - lower).norm(); }
  bool contains(const Vector& x, double slack = 0.0) const;
  /// Same center, each side scaled by `factor`.
  Box inflated(double factor) const;
  void validate(const std::string& what) const;
};

/// Uniform tensor grid over a box, first axis varying fastest.
class Grid {
 public:
  Grid(Box box, std::vector<Index> points_per_axis);
  /// Same count on every axis.
  Grid(Box box, Index points_per_axis);
  /// Smallest grid whose spacing does not exceed `spacing` on any axis.
  static Grid with_spacing(Box box, double spacing);

  Index dim() const { return box_.dim(); }
  Index size() const { return size_; }
  const Box& box() const { return box_; }
  const std::vector<Index>& points_per_axis() const { return counts_; }
  double spacing(Index axis) const;
  Vector point(Index flat) const;
  /// All points as rows of a size() x dim() matrix.
  Matrix points() const;

 private:
  Box box_;
  std::vector<Index> counts_;
  Index size_ = 0;
};

}  // namespace gpcons

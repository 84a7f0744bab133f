#include "gpcons/common.hpp"

#include <cmath>

namespace gpcons {

bool Box::contains(const Vector& x, double slack) const {
  if (x.size() != dim()) return false;
  for (Index k = 0; k < dim(); ++k) {
    if (x(k) < lower(k) - slack || x(k) > upper(k) + slack) return false;
  }
  return true;
}

Box Box::inflated(double factor) const {
  const Vector half = 0.5 * factor * width();
  return Box{center() - half, center() + half};
}

void Box::validate(const std::string& what) const {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw ValidationError(what + ": lower/upper bounds must be non-empty and of equal length");
  }
  for (Index k = 0; k < dim(); ++k) {
    if (!std::isfinite(lower(k)) || !std::isfinite(upper(k)) || !(lower(k) < upper(k))) {
      throw ValidationError(what + ": each axis needs finite lower < upper");
    }
  }
}

Grid::Grid(Box box, std::vector<Index> points_per_axis)
    : box_(std::move(box)), counts_(std::move(points_per_axis)) {
  box_.validate("grid box");
  if (static_cast<Index>(counts_.size()) != box_.dim()) {
    throw ValidationError("grid: one point count per axis required");
  }
  size_ = 1;
  for (Index c : counts_) {
    if (c < 2) throw ValidationError("grid: need at least 2 points per axis");
    size_ *= c;
  }
}

Grid::Grid(Box box, Index points_per_axis)
    : Grid(box, std::vector<Index>(static_cast<std::size_t>(box.dim()), points_per_axis)) {}

Grid Grid::with_spacing(Box box, double spacing) {
  if (!(spacing > 0.0)) throw ValidationError("grid: spacing must be positive");
  box.validate("grid box");
  std::vector<Index> counts;
  for (Index k = 0; k < box.dim(); ++k) {
    // 1e-9 keeps an exact multiple of the spacing from gaining a point
    const double cells = std::ceil(box.width()(k) / spacing - 1e-9);
    counts.push_back(std::max<Index>(2, static_cast<Index>(cells) + 1));
  }
  return Grid(std::move(box), std::move(counts));
}

double Grid::spacing(Index axis) const {
  return box_.width()(axis) / static_cast<double>(counts_[static_cast<std::size_t>(axis)] - 1);
}

Vector Grid::point(Index flat) const {
  Vector x(dim());
  for (Index k = 0; k < dim(); ++k) {
    const Index c = counts_[static_cast<std::size_t>(k)];
    const Index idx = flat % c;
    flat /= c;
    // interpolate from both ends so the last point lands exactly on upper
    const double s = static_cast<double>(idx) / static_cast<double>(c - 1);
    x(k) = (idx == c - 1) ? box_.upper(k) : box_.lower(k) + s * (box_.upper(k) - box_.lower(k));
  }
  return x;
}

Matrix Grid::points() const {
  Matrix out(size_, dim());
  for (Index p = 0; p < size_; ++p) out.row(p) = point(p).transpose();
  return out;
}

}  // namespace gpcons

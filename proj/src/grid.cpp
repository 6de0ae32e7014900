#include "funss/grid.hpp"

#include <cmath>
#include <utility>

#include "funss/errors.hpp"

namespace funss {

Grid::Grid(Eigen::VectorXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() != weights_.size()) {
    throw DimensionError("grid: points and weights lengths differ");
  }
  if (points_.size() < 1) {
    throw DimensionError("grid: needs at least one point");
  }
  for (Eigen::Index i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_(i)) || !std::isfinite(weights_(i))) {
      throw DataError("grid: non-finite entry");
    }
    if (weights_(i) <= 0.0) {
      throw DataError("grid: weights must be strictly positive");
    }
    if (i > 0 && points_(i) <= points_(i - 1)) {
      throw DataError("grid: points must be strictly increasing");
    }
  }
}

Grid Grid::uniform(double a, double b, int l) {
  if (!(b > a)) throw ParameterError("grid: interval must satisfy a < b");
  if (l < 1) throw ParameterError("grid: need at least one point");
  const double h = (b - a) / static_cast<double>(l);
  Eigen::VectorXd pts(l), w(l);
  for (int i = 0; i < l; ++i) {
    pts(i) = a + (static_cast<double>(i) + 0.5) * h;
    w(i) = h;
  }
  return Grid(std::move(pts), std::move(w));
}

bool Grid::same_as(const Grid& other) const {
  return points_.size() == other.points_.size() && points_ == other.points_ &&
         weights_ == other.weights_;
}

double inner_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Grid& grid) {
  if (u.size() != grid.size() || v.size() != grid.size()) {
    throw DimensionError("inner_product: length mismatch with grid");
  }
  return (u.array() * v.array() * grid.weights().array()).sum();
}

double sq_norm(const Eigen::VectorXd& u, const Grid& grid) { return inner_product(u, u, grid); }

}  // namespace funss

#pragma once

#include <Eigen/Core>

namespace funss {

/// Discretization of the function domain: L abscissae with positive
/// quadrature weights. The weighted inner product <u, v> = sum_i w_i u_i v_i
/// stands in for the L2 integral everywhere in this library.
class Grid {
 public:
  Grid(Eigen::VectorXd points, Eigen::VectorXd weights);

  /// L midpoints of equal subintervals of [a, b], each with weight (b-a)/L.
  static Grid uniform(double a, double b, int l);

  int size() const { return static_cast<int>(points_.size()); }
  const Eigen::VectorXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  bool same_as(const Grid& other) const;

 private:
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
};

/// Quadrature inner product of two grid functions. Throws DimensionError on
/// length mismatch.
double inner_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const Grid& grid);

/// Weighted squared norm <u, u>.
double sq_norm(const Eigen::VectorXd& u, const Grid& grid);

}  // namespace funss

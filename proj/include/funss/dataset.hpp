#pragma once

#include <Eigen/Core>

#include "funss/grid.hpp"

namespace funss {

/// N discretized functions sharing one grid; row n holds x_n sampled on the
/// grid points. Immutable after construction.
class FunctionalDataset {
 public:
  FunctionalDataset(Grid grid, Eigen::MatrixXd values, bool centered = false);

  int n() const { return static_cast<int>(values_.rows()); }
  int l() const { return static_cast<int>(values_.cols()); }
  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  bool centered() const { return centered_; }

  Eigen::VectorXd row(int n) const { return values_.row(n).transpose(); }

  /// Weighted squared norms ||x_n||^2, one entry per sample.
  Eigen::VectorXd row_sq_norms() const;

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
  bool centered_;
};

/// Subtract the column mean from every row and mark the result centered.
/// Idempotent up to floating point roundoff.
FunctionalDataset center(const FunctionalDataset& dataset);

/// Scalar responses paired with a dataset.
struct ResponseVector {
  Eigen::VectorXd values;
  bool centered = false;
};

/// Subtract the mean response.
ResponseVector center(const ResponseVector& y);

}  // namespace funss

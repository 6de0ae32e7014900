#pragma once

#include <Eigen/Core>

#include "funss/dataset.hpp"
#include "funss/grid.hpp"

namespace funss {

/// Eigenvalues below this fraction of the leading one are treated as exact
/// zeros: the empirical spectrum vanishes beyond min(N, L) and anything at
/// this level is roundoff from the eigensolver.
inline constexpr double kEigenvalueRelFloor = 1e-12;

/// Ranked eigenpairs (sigma_r^2, theta_r) of a covariance operator. Rows of
/// eigenfunctions() are orthonormal under the grid's weighted inner product.
class SpectralModel {
 public:
  SpectralModel(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions, Grid grid,
                bool truncated = false);

  int rank() const { return static_cast<int>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
  Eigen::VectorXd eigenfunction(int r) const { return eigenfunctions_.row(r).transpose(); }
  const Grid& grid() const { return grid_; }

  /// True when the requested rank exceeded the numerical rank and the model
  /// was returned shorter than asked for.
  bool truncated() const { return truncated_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenfunctions_;
  Grid grid_;
  bool truncated_;
};

/// Principal component scores xi_{nr} = <x_n, theta_r> / sigma_r, with the
/// convention xi_{nr} = 1 whenever sigma_r^2 = 0.
struct ScoreMatrix {
  Eigen::MatrixXd scores;  // N x K
  int source_rank = 0;
};

/// Plain projection coefficients <x_n, theta_r> for r < R (no 1/sigma scale).
Eigen::MatrixXd projection_coeffs(const FunctionalDataset& dataset, const SpectralModel& model,
                                  int r);

ScoreMatrix compute_scores(const FunctionalDataset& dataset, const SpectralModel& model, int r);

/// Squared residual norms ||(I - P_R) x_n||^2, clamped at zero when roundoff
/// drives the difference negative.
Eigen::VectorXd residual_norms(const FunctionalDataset& dataset, const SpectralModel& model,
                               int r);

}  // namespace funss

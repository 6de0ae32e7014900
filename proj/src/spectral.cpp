#include "funss/spectral.hpp"

#include <cmath>
#include <utility>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

SpectralModel::SpectralModel(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions,
                             Grid grid, bool truncated)
    : eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)),
      grid_(std::move(grid)),
      truncated_(truncated) {
  if (eigenfunctions_.rows() != eigenvalues_.size()) {
    throw DimensionError("spectral model: eigenvalue/eigenfunction count mismatch");
  }
  if (eigenfunctions_.cols() != grid_.size()) {
    throw DimensionError("spectral model: eigenfunction length must match grid");
  }
  for (Eigen::Index r = 0; r < eigenvalues_.size(); ++r) {
    if (eigenvalues_(r) < 0.0 || !std::isfinite(eigenvalues_(r))) {
      throw DataError("spectral model: eigenvalues must be finite and nonnegative");
    }
    if (r > 0 && eigenvalues_(r) > eigenvalues_(r - 1)) {
      throw DataError("spectral model: eigenvalues must be nonincreasing");
    }
  }
}

Eigen::MatrixXd projection_coeffs(const FunctionalDataset& dataset, const SpectralModel& model,
                                  int r) {
  if (!dataset.grid().same_as(model.grid())) {
    throw DimensionError("projection: dataset and model grids differ");
  }
  if (r < 0 || r > model.rank()) {
    throw DimensionError("projection: rank out of range");
  }
  const Eigen::Index l = dataset.l();
  Eigen::MatrixXd p(l, r);
  for (int k = 0; k < r; ++k) {
    p.col(k) = model.eigenfunctions().row(k).transpose().cwiseProduct(dataset.grid().weights());
  }
  return kernels::matmul_rows(dataset.values(), p);
}

ScoreMatrix compute_scores(const FunctionalDataset& dataset, const SpectralModel& model, int r) {
  Eigen::MatrixXd coeffs = projection_coeffs(dataset, model, r);
  for (int k = 0; k < r; ++k) {
    const double ev = model.eigenvalues()(k);
    if (ev > 0.0) {
      coeffs.col(k) /= std::sqrt(ev);
    } else {
      coeffs.col(k).setOnes();
    }
  }
  return ScoreMatrix{std::move(coeffs), r};
}

Eigen::VectorXd residual_norms(const FunctionalDataset& dataset, const SpectralModel& model,
                               int r) {
  const Eigen::MatrixXd coeffs = projection_coeffs(dataset, model, r);
  const Eigen::VectorXd norms = dataset.row_sq_norms();
  Eigen::VectorXd out(dataset.n());
  for (Eigen::Index n = 0; n < out.size(); ++n) {
    const double v = norms(n) - coeffs.row(n).squaredNorm();
    out(n) = v > 0.0 ? v : 0.0;
  }
  return out;
}

}  // namespace funss

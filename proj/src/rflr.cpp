#include "funss/rflr.hpp"

#include <cmath>
#include <string>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

namespace {

/// Apply the rank-R truncated inverse of the model's operator to a grid
/// function: sum_{r<=R} <u, theta_r> / sigma_r^2 theta_r.
Eigen::VectorXd truncated_inverse_apply(const SpectralModel& model, int rank,
                                        const Eigen::VectorXd& u) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
  for (int r = 0; r < rank; ++r) {
    const Eigen::VectorXd th = model.eigenfunction(r);
    out += inner_product(u, th, model.grid()) / model.eigenvalues()(r) * th;
  }
  return out;
}

/// Orthogonal projection onto the model's leading-R directions.
Eigen::VectorXd project(const SpectralModel& model, int rank, const Eigen::VectorXd& u) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
  for (int r = 0; r < rank; ++r) {
    const Eigen::VectorXd th = model.eigenfunction(r);
    out += inner_product(u, th, model.grid()) * th;
  }
  return out;
}

void require_rank(const SpectralModel& model, int rank, const char* who) {
  if (model.rank() < rank || !(model.eigenvalues()(rank - 1) > 0.0)) {
    const int have = model.rank();
    throw NumericalError(std::string(who) + ": covariance estimate is rank deficient at R = " +
                         std::to_string(rank) + " (numerical rank " + std::to_string(have) +
                         ")");
  }
}

RegressionFit fit_from_model(const FunctionalDataset& dataset, const Eigen::VectorXd& z,
                             SpectralModel model, int rank) {
  RegressionFit fit{Eigen::VectorXd(), rank, Eigen::VectorXd(), Eigen::VectorXd(),
                    std::move(model), 0.0};
  fit.psi = truncated_inverse_apply(fit.model, rank, z);
  fit.fitted = predict(dataset, fit.psi);
  fit.conditioning = fit.model.eigenvalues()(rank - 1) / fit.model.eigenvalues()(0);
  return fit;
}

}  // namespace

Eigen::VectorXd predict(const FunctionalDataset& dataset, const Eigen::VectorXd& psi) {
  if (psi.size() != dataset.l()) {
    throw DimensionError("predict: psi length must match the grid");
  }
  const Eigen::VectorXd wpsi = psi.cwiseProduct(dataset.grid().weights());
  return kernels::matmul_rows(dataset.values(), wpsi);
}

RegressionFit flr_full(const FunctionalDataset& dataset, const ResponseVector& y, int rank) {
  if (y.values.size() != dataset.n()) {
    throw DimensionError("flr_full: response length must match the sample count");
  }
  if (!dataset.centered() || !y.centered) {
    throw DataError("flr_full: both the dataset and the response must be centered");
  }
  if (rank < 1) throw ParameterError("flr_full: need rank >= 1");
  SpectralModel model = fpca_full(dataset, rank);
  require_rank(model, rank, "flr_full");
  const Eigen::VectorXd z =
      dataset.values().transpose() * y.values / static_cast<double>(dataset.n());
  RegressionFit fit = fit_from_model(dataset, z, std::move(model), rank);
  fit.residual = y.values - fit.fitted;
  return fit;
}

RegressionFit flr_randomized(const FunctionalDataset& dataset, const ResponseVector& y,
                             const SubsampleDraw& draw, int rank) {
  if (y.values.size() != dataset.n()) {
    throw DimensionError("flr_randomized: response length must match the sample count");
  }
  if (!dataset.centered() || !y.centered) {
    throw DataError("flr_randomized: both the dataset and the response must be centered");
  }
  if (rank < 1) throw ParameterError("flr_randomized: need rank >= 1");
  const WeightedSketch sketch = cov_subsampled(dataset, draw);
  SpectralModel model = spectral_from_rows(sketch.rows, dataset.grid(), rank);
  require_rank(model, rank, "flr_randomized");

  const int c = static_cast<int>(draw.indices.size());
  const double n = static_cast<double>(dataset.n());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dataset.l());
  for (int i = 0; i < c; ++i) {
    z += y.values(draw.indices[i]) /
         (static_cast<double>(c) * n * draw.probs(i)) *
         dataset.values().row(draw.indices[i]).transpose();
  }
  return fit_from_model(dataset, z, std::move(model), rank);
}

RegressionFit flr_randomized(const FunctionalDataset& dataset, const ResponseVector& y,
                             const SamplingDistribution& dist, int c, int rank,
                             std::uint64_t seed) {
  return flr_randomized(dataset, y, draw_with_replacement(dist, c, seed), rank);
}

FlrErrorDecomposition flr_error_decomposition(const FunctionalDataset& dataset,
                                              const ResponseVector& y,
                                              const RegressionFit& full_fit,
                                              const RegressionFit& sub_fit,
                                              const SubsampleDraw& draw) {
  if (full_fit.rank != sub_fit.rank) {
    throw DataError("flr_error_decomposition: fits disagree on the truncation rank");
  }
  if (full_fit.residual.size() != dataset.n()) {
    throw DataError("flr_error_decomposition: full_fit must be a full-sample fit with residual");
  }
  const int rank = full_fit.rank;
  const int c = static_cast<int>(draw.indices.size());
  const double n = static_cast<double>(dataset.n());
  const SpectralModel& hat = full_fit.model;
  const SpectralModel& tilde = sub_fit.model;

  // T^+ Y through x_n^+ = sum_r xi_{nr} theta_r / sigma_r.
  const ScoreMatrix scores = compute_scores(dataset, hat, rank);
  Eigen::VectorXd t_plus_y = Eigen::VectorXd::Zero(dataset.l());
  for (int r = 0; r < rank; ++r) {
    const double coef =
        scores.scores.col(r).dot(y.values) / (n * std::sqrt(hat.eigenvalues()(r)));
    t_plus_y += coef * hat.eigenfunction(r);
  }

  FlrErrorDecomposition out;
  out.subspace_term =
      predict(dataset, project(tilde, rank, t_plus_y) - project(hat, rank, t_plus_y));

  // (D*D) Y_perp as a reweighting of the full residual vector.
  Eigen::VectorXd reweighted = Eigen::VectorXd::Zero(dataset.n());
  for (int i = 0; i < c; ++i) {
    reweighted(draw.indices[i]) +=
        full_fit.residual(draw.indices[i]) / (static_cast<double>(c) * draw.probs(i));
  }
  const Eigen::VectorXd t_star = dataset.values().transpose() * reweighted / n;

  out.inverse_term = predict(dataset, truncated_inverse_apply(tilde, rank, t_star) -
                                          truncated_inverse_apply(hat, rank, t_star));
  out.residual_term = predict(dataset, truncated_inverse_apply(hat, rank, t_star));

  // A mismatched (draw, sub_fit) pairing breaks the exact identity
  // I + II + III = T psi_tilde - T psi_hat; use it as a consistency check.
  const Eigen::VectorXd gap = sub_fit.fitted - full_fit.fitted;
  const double scale = std::max(1.0, y.values.norm() / std::sqrt(n));
  const double dev =
      (out.subspace_term + out.inverse_term + out.residual_term - gap).cwiseAbs().maxCoeff();
  if (dev > 1e-6 * scale) {
    throw DataError("flr_error_decomposition: draw does not match the subsampled fit");
  }
  return out;
}

}  // namespace funss

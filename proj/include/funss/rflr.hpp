#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "funss/dataset.hpp"
#include "funss/rfpca.hpp"
#include "funss/sampling.hpp"
#include "funss/spectral.hpp"

namespace funss {

/// Scalar-response functional regression fit through the rank-R truncated
/// inverse of a covariance estimate.
struct RegressionFit {
  Eigen::VectorXd psi;       // regression function on the grid
  int rank = 0;
  Eigen::VectorXd fitted;    // predictions over the full dataset
  Eigen::VectorXd residual;  // Y - fitted; only set for full-sample fits
  SpectralModel model;       // spectral model behind the truncated inverse
  double conditioning = 0.0;  // min_{r<=R} sigma_r^2 / sigma_1^2
};

/// Full-sample estimator psi = C_hat^+ z_hat with z_hat = (1/N) sum Y_n x_n.
/// Requires centered inputs; throws DataError otherwise.
RegressionFit flr_full(const FunctionalDataset& dataset, const ResponseVector& y, int rank);

/// Randomized estimator from a given draw; fitted values cover the full
/// dataset, the residual field stays empty.
RegressionFit flr_randomized(const FunctionalDataset& dataset, const ResponseVector& y,
                             const SubsampleDraw& draw, int rank);

RegressionFit flr_randomized(const FunctionalDataset& dataset, const ResponseVector& y,
                             const SamplingDistribution& dist, int c, int rank,
                             std::uint64_t seed);

/// T u = (<x_1, u>, ..., <x_N, u>)^T.
Eigen::VectorXd predict(const FunctionalDataset& dataset, const Eigen::VectorXd& psi);

/// The three terms of the subsampling prediction-error decomposition; they
/// sum to T psi_tilde - T psi_hat.
struct FlrErrorDecomposition {
  Eigen::VectorXd subspace_term;  // T (P_tilde - P_hat) T^+ Y
  Eigen::VectorXd inverse_term;   // T (C_tilde^+ - C_hat^+) T* (D*D) Y_perp
  Eigen::VectorXd residual_term;  // T C_hat^+ T* (D*D) Y_perp
};

FlrErrorDecomposition flr_error_decomposition(const FunctionalDataset& dataset,
                                              const ResponseVector& y,
                                              const RegressionFit& full_fit,
                                              const RegressionFit& sub_fit,
                                              const SubsampleDraw& draw);

}  // namespace funss

#pragma once

#include <Eigen/Core>

#include <cstdint>

#include "funss/dataset.hpp"
#include "funss/sampling.hpp"
#include "funss/spectral.hpp"

namespace funss {

/// Subsample sketch: row c holds x_{i_c} / sqrt(C * N * p_c), so the
/// operator sum_c row_c (x) row_c under the weighted inner product equals the
/// subsampled covariance estimate. Never materializes an L x L matrix.
struct WeightedSketch {
  Eigen::MatrixXd rows;  // C x L
  SubsampleDraw draw;
};

/// Eigenpairs of the operator sum_m rows_m (x) rows_m under the grid's
/// weighted inner product. Decomposes the M x M Gram when M <= L and the
/// L x L normal matrix otherwise. Returns at most `rank` pairs, fewer (with
/// the truncated flag) when the numerical rank falls short.
SpectralModel spectral_from_rows(const Eigen::MatrixXd& rows, const Grid& grid, int rank);

/// Leading-R slice of a model (same eigenpairs, shorter).
SpectralModel truncate(const SpectralModel& model, int rank);

/// Full-sample FPCA: top eigenpairs of (1/N) sum_n x_n (x) x_n.
SpectralModel fpca_full(const FunctionalDataset& dataset, int rank);

WeightedSketch cov_subsampled(const FunctionalDataset& dataset, const SubsampleDraw& draw);

SpectralModel fpca_randomized(const FunctionalDataset& dataset, const SubsampleDraw& draw,
                              int rank);

SpectralModel fpca_randomized(const FunctionalDataset& dataset, const SamplingDistribution& dist,
                              int c, int rank, std::uint64_t seed);

/// Fraction of variance explained by the model's leading `rank` directions:
/// sum_n ||P_R x_n||^2 / sum_n ||x_n||^2.
double fve(const FunctionalDataset& dataset, const SpectralModel& model, int rank);

}  // namespace funss

#include "funss/rfpca.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

namespace {

/// Fix each eigenfunction's sign so its largest-magnitude coordinate is
/// positive; makes decompositions reproducible across code paths.
void fix_signs(Eigen::MatrixXd& eigenfunctions) {
  for (Eigen::Index r = 0; r < eigenfunctions.rows(); ++r) {
    Eigen::Index at = 0;
    eigenfunctions.row(r).cwiseAbs().maxCoeff(&at);
    if (eigenfunctions(r, at) < 0.0) eigenfunctions.row(r) *= -1.0;
  }
}

}  // namespace

SpectralModel spectral_from_rows(const Eigen::MatrixXd& rows, const Grid& grid, int rank) {
  if (rows.cols() != grid.size()) {
    throw DimensionError("spectral_from_rows: row length must match grid");
  }
  if (rank < 1) throw ParameterError("spectral_from_rows: need rank >= 1");
  const Eigen::Index m = rows.rows();
  const Eigen::Index l = rows.cols();

  // Scale columns by sqrt(w): the operator becomes an ordinary symmetric
  // matrix problem, and eigenvectors map back by dividing sqrt(w).
  const Eigen::VectorXd sqrt_w = grid.weights().cwiseSqrt();
  Eigen::MatrixXd scaled = rows;
  for (Eigen::Index j = 0; j < l; ++j) scaled.col(j) *= sqrt_w(j);

  Eigen::VectorXd lambda;
  Eigen::MatrixXd funcs;  // rows = eigenfunctions on the grid
  if (m <= l) {
    // Gram route: M x M problem, eigenfunctions recovered from the rows.
    const Eigen::MatrixXd scaled_t = scaled.transpose();
    const Eigen::MatrixXd gram = kernels::gram_cols(scaled_t);  // M x M
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) {
      throw NumericalError("spectral_from_rows: eigensolver failed on the Gram matrix");
    }
    const double top = es.eigenvalues().maxCoeff();
    const double floor = top > 0.0 ? top * kEigenvalueRelFloor : 0.0;
    int keep = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (es.eigenvalues()(i) > floor && es.eigenvalues()(i) > 0.0) ++keep;
    }
    if (keep > rank) keep = rank;
    lambda.resize(keep);
    funcs.resize(keep, l);
    for (int k = 0; k < keep; ++k) {
      const Eigen::Index src = m - 1 - k;  // ascending order in the solver
      lambda(k) = es.eigenvalues()(src);
      Eigen::VectorXd v = scaled_t * es.eigenvectors().col(src);
      v /= std::sqrt(lambda(k));
      funcs.row(k) = (v.array() / sqrt_w.array()).transpose();
    }
  } else {
    // Normal-matrix route: L x L problem.
    const Eigen::MatrixXd normal = kernels::gram_cols(scaled);  // L x L
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal);
    if (es.info() != Eigen::Success) {
      throw NumericalError("spectral_from_rows: eigensolver failed on the normal matrix");
    }
    const double top = es.eigenvalues().maxCoeff();
    const double floor = top > 0.0 ? top * kEigenvalueRelFloor : 0.0;
    int keep = 0;
    for (Eigen::Index i = 0; i < l; ++i) {
      if (es.eigenvalues()(i) > floor && es.eigenvalues()(i) > 0.0) ++keep;
    }
    if (keep > rank) keep = rank;
    lambda.resize(keep);
    funcs.resize(keep, l);
    for (int k = 0; k < keep; ++k) {
      const Eigen::Index src = l - 1 - k;
      lambda(k) = es.eigenvalues()(src);
      funcs.row(k) =
          (es.eigenvectors().col(src).array() / sqrt_w.array()).transpose();
    }
  }
  fix_signs(funcs);
  const bool truncated = static_cast<int>(lambda.size()) < rank;
  return SpectralModel(std::move(lambda), std::move(funcs), grid, truncated);
}

SpectralModel truncate(const SpectralModel& model, int rank) {
  if (rank < 0 || rank > model.rank()) {
    throw DimensionError("truncate: rank out of range");
  }
  return SpectralModel(model.eigenvalues().head(rank),
                       model.eigenfunctions().topRows(rank), model.grid(), model.truncated());
}

SpectralModel fpca_full(const FunctionalDataset& dataset, int rank) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(dataset.n()));
  return spectral_from_rows(dataset.values() * scale, dataset.grid(), rank);
}

WeightedSketch cov_subsampled(const FunctionalDataset& dataset, const SubsampleDraw& draw) {
  const int c = static_cast<int>(draw.indices.size());
  if (c < 1) throw DataError("cov_subsampled: empty draw");
  const double n = static_cast<double>(dataset.n());
  WeightedSketch sketch;
  sketch.rows.resize(c, dataset.l());
  for (int i = 0; i < c; ++i) {
    const int idx = draw.indices[i];
    if (idx < 0 || idx >= dataset.n()) {
      throw DataError("cov_subsampled: draw index " + std::to_string(idx) + " out of range");
    }
    const double p = draw.probs(i);
    if (!(p > 0.0)) {
      throw DataError("cov_subsampled: drawn index " + std::to_string(idx) +
                      " has zero probability");
    }
    sketch.rows.row(i) =
        dataset.values().row(idx) / std::sqrt(static_cast<double>(c) * n * p);
  }
  sketch.draw = draw;
  return sketch;
}

SpectralModel fpca_randomized(const FunctionalDataset& dataset, const SubsampleDraw& draw,
                              int rank) {
  const WeightedSketch sketch = cov_subsampled(dataset, draw);
  return spectral_from_rows(sketch.rows, dataset.grid(), rank);
}

SpectralModel fpca_randomized(const FunctionalDataset& dataset, const SamplingDistribution& dist,
                              int c, int rank, std::uint64_t seed) {
  return fpca_randomized(dataset, draw_with_replacement(dist, c, seed), rank);
}

double fve(const FunctionalDataset& dataset, const SpectralModel& model, int rank) {
  if (rank < 0 || rank > model.rank()) {
    throw DimensionError("fve: rank exceeds the model rank");
  }
  const double total = dataset.row_sq_norms().sum();
  if (!(total > 0.0)) throw DataError("fve: all-zero dataset, ratio undefined");
  if (rank == 0) return 0.0;
  const Eigen::MatrixXd coeffs = projection_coeffs(dataset, model, rank);
  return coeffs.squaredNorm() / total;
}

}  // namespace funss

#include "funss/dataset.hpp"

#include <cmath>
#include <utility>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

FunctionalDataset::FunctionalDataset(Grid grid, Eigen::MatrixXd values, bool centered)
    : grid_(std::move(grid)), values_(std::move(values)), centered_(centered) {
  if (values_.cols() != grid_.size()) {
    throw DimensionError("dataset: value columns must match grid length");
  }
  if (values_.rows() < 1 || values_.cols() < 2) {
    throw DimensionError("dataset: need N >= 1 samples on L >= 2 points");
  }
  if (!values_.allFinite()) {
    throw DataError("dataset: non-finite sample value");
  }
}

Eigen::VectorXd FunctionalDataset::row_sq_norms() const {
  return kernels::row_weighted_sq_norms(values_, grid_.weights());
}

FunctionalDataset center(const FunctionalDataset& dataset) {
  const Eigen::RowVectorXd mean = kernels::col_mean(dataset.values());
  return FunctionalDataset(dataset.grid(), kernels::subtract_row(dataset.values(), mean), true);
}

ResponseVector center(const ResponseVector& y) {
  if (y.values.size() < 1) throw DimensionError("response: empty vector");
  return ResponseVector{y.values.array() - y.values.mean(), true};
}

}  // namespace funss

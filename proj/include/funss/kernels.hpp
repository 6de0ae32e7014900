#pragma once

#include <Eigen/Core>

namespace funss::kernels {

// Data-parallel building blocks shared by the estimators. Every kernel has a
// serial twin in kernels::serial with the identical per-element computation;
// the OpenMP versions only split independent output elements across threads,
// so serial and parallel results are bit-identical for any thread count.

namespace serial {

/// A^T * A via column dot products (A is tall: rows are summed over).
Eigen::MatrixXd gram_cols(const Eigen::MatrixXd& a);

/// Row-wise weighted squared norms: out_n = sum_i w_i * x_{ni}^2.
Eigen::VectorXd row_weighted_sq_norms(const Eigen::MatrixXd& x, const Eigen::VectorXd& w);

/// Dense product X * P, parallelized over rows of X in the OpenMP twin.
Eigen::MatrixXd matmul_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& p);

/// Column means of X.
Eigen::RowVectorXd col_mean(const Eigen::MatrixXd& x);

/// X with a row vector subtracted from every row.
Eigen::MatrixXd subtract_row(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& m);

}  // namespace serial

Eigen::MatrixXd gram_cols(const Eigen::MatrixXd& a);
Eigen::VectorXd row_weighted_sq_norms(const Eigen::MatrixXd& x, const Eigen::VectorXd& w);
Eigen::MatrixXd matmul_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& p);
Eigen::RowVectorXd col_mean(const Eigen::MatrixXd& x);
Eigen::MatrixXd subtract_row(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& m);

}  // namespace funss::kernels

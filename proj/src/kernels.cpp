#include "funss/kernels.hpp"

#include "funss/parallel.hpp"

namespace funss::kernels {

namespace serial {

Eigen::MatrixXd gram_cols(const Eigen::MatrixXd& a) {
  const Eigen::Index k = a.cols();
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = a.col(i).dot(a.col(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Eigen::VectorXd row_weighted_sq_norms(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd out(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    out(r) = (x.row(r).transpose().array().square() * w.array()).sum();
  }
  return out;
}

Eigen::MatrixXd matmul_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& p) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd out(n, p.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    out.row(r) = x.row(r) * p;
  }
  return out;
}

Eigen::RowVectorXd col_mean(const Eigen::MatrixXd& x) {
  const Eigen::Index l = x.cols();
  Eigen::RowVectorXd out(l);
  for (Eigen::Index j = 0; j < l; ++j) {
    out(j) = x.col(j).mean();
  }
  return out;
}

Eigen::MatrixXd subtract_row(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& m) {
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out.col(j) = x.col(j).array() - m(j);
  }
  return out;
}

}  // namespace serial

// The OpenMP versions split the same per-element computations across
// threads. Each output element is produced by exactly one thread running the
// code from the serial twin, so results match bit for bit.

Eigen::MatrixXd gram_cols(const Eigen::MatrixXd& a) {
  const int threads = parallel::thread_count();
  if (threads <= 1) return serial::gram_cols(a);
  const Eigen::Index k = a.cols();
  Eigen::MatrixXd out(k, k);
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = a.col(i).dot(a.col(j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

Eigen::VectorXd row_weighted_sq_norms(const Eigen::MatrixXd& x, const Eigen::VectorXd& w) {
  const int threads = parallel::thread_count();
  if (threads <= 1) return serial::row_weighted_sq_norms(x, w);
  const Eigen::Index n = x.rows();
  Eigen::VectorXd out(n);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Eigen::Index r = 0; r < n; ++r) {
    out(r) = (x.row(r).transpose().array().square() * w.array()).sum();
  }
  return out;
}

Eigen::MatrixXd matmul_rows(const Eigen::MatrixXd& x, const Eigen::MatrixXd& p) {
  const int threads = parallel::thread_count();
  if (threads <= 1) return serial::matmul_rows(x, p);
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd out(n, p.cols());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Eigen::Index r = 0; r < n; ++r) {
    out.row(r) = x.row(r) * p;
  }
  return out;
}

Eigen::RowVectorXd col_mean(const Eigen::MatrixXd& x) {
  const int threads = parallel::thread_count();
  if (threads <= 1) return serial::col_mean(x);
  const Eigen::Index l = x.cols();
  Eigen::RowVectorXd out(l);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Eigen::Index j = 0; j < l; ++j) {
    out(j) = x.col(j).mean();
  }
  return out;
}

Eigen::MatrixXd subtract_row(const Eigen::MatrixXd& x, const Eigen::RowVectorXd& m) {
  const int threads = parallel::thread_count();
  if (threads <= 1) return serial::subtract_row(x, m);
  Eigen::MatrixXd out(x.rows(), x.cols());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    out.col(j) = x.col(j).array() - m(j);
  }
  return out;
}

}  // namespace funss::kernels

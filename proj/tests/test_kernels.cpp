#include <doctest.h>

#include <Eigen/Dense>

#include <cstdlib>

#include "funss/kernels.hpp"
#include "funss/parallel.hpp"
#include "testutil.hpp"

using namespace funss;

namespace {

struct ThreadGuard {
  int saved = parallel::thread_count();
  ~ThreadGuard() { parallel::set_thread_count(saved); }
};

}  // namespace

TEST_CASE("omp kernels match the serial reference bit for bit") {
  ThreadGuard guard;
  const Eigen::MatrixXd x = testutil::gaussian_matrix(173, 37, 11);
  const Eigen::VectorXd w = Eigen::VectorXd::Random(37).array().abs() + 0.1;
  const Eigen::MatrixXd p = testutil::gaussian_matrix(37, 6, 12);
  const Eigen::RowVectorXd m = testutil::gaussian_matrix(1, 37, 13).row(0);

  for (int threads : {1, 2, 4}) {
    parallel::set_thread_count(threads);
    CHECK(kernels::gram_cols(x) == kernels::serial::gram_cols(x));
    CHECK(kernels::row_weighted_sq_norms(x, w) == kernels::serial::row_weighted_sq_norms(x, w));
    CHECK(kernels::matmul_rows(x, p) == kernels::serial::matmul_rows(x, p));
    CHECK(kernels::col_mean(x) == kernels::serial::col_mean(x));
    CHECK(kernels::subtract_row(x, m) == kernels::serial::subtract_row(x, m));
  }
}

TEST_CASE("FUNSS_THREADS caps the worker pool") {
  ThreadGuard guard;
  setenv("FUNSS_THREADS", "1", 1);
  parallel::init_from_env();
  CHECK(parallel::thread_count() == 1);
  setenv("FUNSS_THREADS", "not-a-number", 1);
  parallel::init_from_env();
  CHECK(parallel::thread_count() >= 1);
  unsetenv("FUNSS_THREADS");
  parallel::init_from_env();
  CHECK(parallel::thread_count() >= 1);
}

TEST_CASE("gram_cols agrees with a naive triple loop") {
  const Eigen::MatrixXd a = testutil::gaussian_matrix(41, 13, 5);
  Eigen::MatrixXd naive = Eigen::MatrixXd::Zero(13, 13);
  for (int i = 0; i < 13; ++i) {
    for (int j = 0; j < 13; ++j) {
      for (int r = 0; r < 41; ++r) naive(i, j) += a(r, i) * a(r, j);
    }
  }
  const Eigen::MatrixXd got = kernels::gram_cols(a);
  CHECK((got - naive).cwiseAbs().maxCoeff() <= 1e-12 * naive.cwiseAbs().maxCoeff());
  CHECK(got == got.transpose());  // exact symmetry by construction
}

TEST_CASE("row_weighted_sq_norms and matmul_rows against plain loops") {
  const Eigen::MatrixXd x = testutil::gaussian_matrix(29, 17, 6);
  const Eigen::VectorXd w = Eigen::VectorXd::LinSpaced(17, 0.5, 2.0);
  const Eigen::VectorXd norms = kernels::row_weighted_sq_norms(x, w);
  for (int r = 0; r < 29; ++r) {
    double acc = 0.0;
    for (int j = 0; j < 17; ++j) acc += w(j) * x(r, j) * x(r, j);
    CHECK(norms(r) == doctest::Approx(acc).epsilon(1e-13));
  }
  const Eigen::MatrixXd p = testutil::gaussian_matrix(17, 4, 7);
  const Eigen::MatrixXd prod = kernels::matmul_rows(x, p);
  CHECK((prod - x * p).cwiseAbs().maxCoeff() <= 1e-12);
}

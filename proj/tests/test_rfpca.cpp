#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "funss/diagnostics.hpp"
#include "funss/errors.hpp"
#include "funss/rfpca.hpp"
#include "funss/sampling.hpp"
#include "funss/simgen.hpp"
#include "testutil.hpp"

using namespace funss;

TEST_CASE("fpca_full: rank-one data") {
  const int l = 16;
  const Grid g = Grid::uniform(0.0, 1.0, l);
  Eigen::VectorXd x = testutil::gaussian_matrix(l, 1, 3).col(0);
  Eigen::MatrixXd values(6, l);
  for (int n = 0; n < 6; ++n) values.row(n) = x.transpose();
  const FunctionalDataset ds(g, values);
  const SpectralModel model = fpca_full(ds, 3);
  REQUIRE(model.rank() == 1);
  CHECK(model.truncated());
  const double xnorm_sq = sq_norm(x, g);
  CHECK(model.eigenvalues()(0) == doctest::Approx(xnorm_sq).epsilon(1e-12));
  Eigen::VectorXd unit = x / std::sqrt(xnorm_sq);
  const double align = inner_product(model.eigenfunction(0), unit, g);
  CHECK(std::abs(std::abs(align) - 1.0) <= 1e-12);
}

TEST_CASE("fpca_full matches the dense covariance oracle") {
  const FunctionalDataset ds = testutil::gaussian_dataset(30, 12, 71, true);
  const SpectralModel model = fpca_full(ds, 12);

  const Eigen::MatrixXd dense = testutil::dense_cov_scaled(ds);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  const int rank = model.rank();
  for (int r = 0; r < rank; ++r) {
    const double oracle = es.eigenvalues()(12 - 1 - r);
    CHECK(std::abs(model.eigenvalues()(r) - oracle) <= 1e-9 * std::max(1.0, oracle));
    // subspace alignment per eigenvector (generic spectra are simple)
    Eigen::VectorXd v = es.eigenvectors().col(12 - 1 - r);
    Eigen::VectorXd theta_scaled =
        model.eigenfunction(r).cwiseProduct(ds.grid().weights().cwiseSqrt());
    CHECK(std::abs(std::abs(theta_scaled.dot(v)) - 1.0) <= 1e-8);
  }

  // weighted orthonormality of the eigenfunctions
  for (int r = 0; r < rank; ++r) {
    for (int s = 0; s <= r; ++s) {
      const double ip = inner_product(model.eigenfunction(r), model.eigenfunction(s), ds.grid());
      CHECK(std::abs(ip - (r == s ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("both decomposition routes agree (gram vs normal matrix)") {
  // M < L exercises the Gram route, M > L the normal route; compare on the
  // same operator by feeding the same rows.
  const Eigen::MatrixXd rows = testutil::gaussian_matrix(20, 32, 5);
  const Grid g = Grid::uniform(0.0, 1.0, 32);
  const SpectralModel gram_route = spectral_from_rows(rows, g, 8);

  // duplicate rows scaled by 1/sqrt(2): same operator, M = 40 > L = 32
  Eigen::MatrixXd doubled(40, 32);
  doubled.topRows(20) = rows / std::numbers::sqrt2;
  doubled.bottomRows(20) = rows / std::numbers::sqrt2;
  const SpectralModel normal_route = spectral_from_rows(doubled, g, 8);

  REQUIRE(gram_route.rank() == normal_route.rank());
  for (int r = 0; r < gram_route.rank(); ++r) {
    CHECK(gram_route.eigenvalues()(r) ==
          doctest::Approx(normal_route.eigenvalues()(r)).epsilon(1e-9));
    CHECK(eigfun_error(gram_route.eigenfunction(r), normal_route.eigenfunction(r), g) <= 1e-7);
  }
}

TEST_CASE("cov_subsampled: identity resampling and a hand-summed small case") {
  const FunctionalDataset ds = testutil::gaussian_dataset(12, 6, 9, true);
  const WeightedSketch sketch = cov_subsampled(ds, identity_draw(12));
  const Eigen::MatrixXd b_tilde = cov_matrix_scaled(sketch, ds.grid());
  const Eigen::MatrixXd b_hat = cov_matrix_scaled(ds);
  CHECK((b_tilde - b_hat).cwiseAbs().maxCoeff() <= 1e-12 * b_hat.cwiseAbs().maxCoeff());

  // N = 3, C = 2 hand case against the definition
  const FunctionalDataset small = testutil::gaussian_dataset(3, 4, 10);
  SubsampleDraw draw;
  draw.indices = {2, 0};
  draw.probs.resize(2);
  draw.probs << 0.6, 0.2;
  const WeightedSketch s2 = cov_subsampled(small, draw);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(4, 4);
  const Eigen::VectorXd sw = small.grid().weights().cwiseSqrt();
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd xc =
        small.values().row(draw.indices[c]).transpose().cwiseProduct(sw);
    expected += xc * xc.transpose() / (2.0 * 3.0 * draw.probs(c));
  }
  CHECK((cov_matrix_scaled(s2, small.grid()) - expected).cwiseAbs().maxCoeff() <=
        1e-12 * expected.cwiseAbs().maxCoeff());

  // zero-probability and out-of-range draws are rejected
  draw.probs(1) = 0.0;
  CHECK_THROWS_AS(cov_subsampled(small, draw), DataError);
  draw.probs(1) = 0.2;
  draw.indices[1] = 5;
  CHECK_THROWS_AS(cov_subsampled(small, draw), DataError);
}

TEST_CASE("subsampled covariance is unbiased (Monte Carlo)") {
  SimDesign design;
  design.n = 200;
  design.l = 64;
  design.k = 25;
  design.seed = 2024;
  const FunctionalDataset ds = center(synth_dataset(design));
  const SamplingDistribution impo = prob_impo(ds);
  const Eigen::MatrixXd b_hat = cov_matrix_scaled(ds);

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(64, 64);
  const int draws = 2000;
  for (int i = 0; i < draws; ++i) {
    const WeightedSketch sketch =
        cov_subsampled(ds, draw_with_replacement(impo, 50, 5000 + i));
    mean += cov_matrix_scaled(sketch, ds.grid());
  }
  mean /= static_cast<double>(draws);
  CHECK((mean - b_hat).norm() <= 0.05 * b_hat.norm());
}

TEST_CASE("fpca_randomized: degenerate distribution and the no-subsampling limit") {
  const FunctionalDataset ds = testutil::gaussian_dataset(25, 10, 12, true);

  SamplingDistribution point = prob_uniform(25);
  point.probs.setZero();
  point.probs(7) = 1.0;
  const SpectralModel rank1 = fpca_randomized(ds, point, 40, 3, 5);
  REQUIRE(rank1.rank() == 1);
  CHECK(rank1.truncated());
  const Eigen::VectorXd x7 = ds.row(7);
  const double align =
      inner_product(rank1.eigenfunction(0), x7, ds.grid()) / std::sqrt(sq_norm(x7, ds.grid()));
  CHECK(std::abs(std::abs(align) - 1.0) <= 1e-10);

  const SpectralModel via_identity = fpca_randomized(ds, identity_draw(25), 6);
  const SpectralModel full = fpca_full(ds, 6);
  REQUIRE(via_identity.rank() == full.rank());
  for (int r = 0; r < full.rank(); ++r) {
    CHECK(std::abs(via_identity.eigenvalues()(r) - full.eigenvalues()(r)) <=
          1e-9 * full.eigenvalues()(0));
    CHECK((via_identity.eigenfunction(r) - full.eigenfunction(r)).cwiseAbs().maxCoeff() <= 1e-9 *
          full.eigenfunctions().cwiseAbs().maxCoeff());
  }
}

TEST_CASE("subspace sampling beats uniform for projector recovery (ED + NU)") {
  SimDesign design;
  design.n = 2000;
  design.l = 128;
  design.seed = 31;
  const FunctionalDataset ds = center(synth_dataset(design));
  const int r = 5, c = 1000, reps = 200;
  const SpectralModel full = fpca_full(ds, std::min(ds.n(), ds.l()));
  const SpectralModel ref = truncate(full, r);
  const SamplingDistribution unif = prob_uniform(ds.n());

  std::vector<double> err_funss, err_unif;
  for (int rep = 0; rep < reps; ++rep) {
    const SamplingDistribution pilot =
        estimate_funprinss(ds, c, r, 0.5, rng::derive_seed(900, {static_cast<std::uint64_t>(rep), 1}));
    const SpectralModel m1 = fpca_randomized(
        ds, pilot, c, r, rng::derive_seed(900, {static_cast<std::uint64_t>(rep), 2}));
    err_funss.push_back(subspace_error(ref, m1, r).op);
    const SpectralModel m2 = fpca_randomized(
        ds, unif, c, r, rng::derive_seed(901, {static_cast<std::uint64_t>(rep), 3}));
    err_unif.push_back(subspace_error(ref, m2, r).op);
  }
  CHECK(testutil::median(err_funss) < testutil::median(err_unif));
}

TEST_CASE("fve: complete basis, empty projection, eigenvalue-ratio identity") {
  const FunctionalDataset ds = testutil::gaussian_dataset(30, 10, 41, true);
  const SpectralModel model = fpca_full(ds, 10);
  const int rank = model.rank();
  CHECK(fve(ds, model, rank) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fve(ds, model, 0) == 0.0);

  const double total = model.eigenvalues().sum();
  for (int r = 1; r <= rank; ++r) {
    const double expected = model.eigenvalues().head(r).sum() / total;
    CHECK(fve(ds, model, r) == doctest::Approx(expected).epsilon(1e-8));
  }

  const FunctionalDataset zeros(ds.grid(), Eigen::MatrixXd::Zero(5, 10));
  CHECK_THROWS_AS(fve(zeros, model, 2), DataError);
  CHECK_THROWS_AS(fve(ds, model, rank + 1), DimensionError);
}

TEST_CASE("eigenvalue stability and FVE gap under draws") {
  const FunctionalDataset ds = testutil::gaussian_dataset(100, 32, 55, true);
  const SpectralModel full = fpca_full(ds, 32);
  const SpectralModel ref = truncate(full, 4);
  const Eigen::MatrixXd b_hat = cov_matrix_scaled(ds);
  const SamplingDistribution impo = prob_impo(ds);

  for (int i = 0; i < 100; ++i) {
    const SubsampleDraw draw = draw_with_replacement(impo, 60, 7000 + i);
    const WeightedSketch sketch = cov_subsampled(ds, draw);
    const double e_op = sym_diff_norms(cov_matrix_scaled(sketch, ds.grid()), b_hat).op;
    const SpectralModel tilde = spectral_from_rows(sketch.rows, ds.grid(), 4);
    if (tilde.rank() < 4) continue;
    for (int r = 0; r < 4; ++r) {
      CHECK(std::abs(tilde.eigenvalues()(r) - full.eigenvalues()(r)) <= e_op * (1 + 1e-10));
    }
    const double gap = std::abs(fve(ds, ref, 4) - fve(ds, tilde, 4));
    CHECK(gap <= subspace_error(ref, tilde, 4).op * (1 + 1e-10));
  }
}

TEST_CASE("median projector error shrinks with the subsample size") {
  const FunctionalDataset ds = testutil::gaussian_dataset(400, 32, 66, true);
  const SpectralModel ref = truncate(fpca_full(ds, 32), 3);
  const SamplingDistribution unif = prob_uniform(ds.n());
  std::vector<double> medians;
  for (int c : {50, 150, 450}) {
    std::vector<double> errs;
    for (int rep = 0; rep < 60; ++rep) {
      const SpectralModel tilde = fpca_randomized(
          ds, unif, c, 3, rng::derive_seed(123, {static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(rep)}));
      if (tilde.rank() < 3) continue;
      errs.push_back(subspace_error(ref, tilde, 3).hs);
    }
    medians.push_back(testutil::median(errs));
  }
  CHECK(medians[1] <= medians[0]);
  CHECK(medians[2] <= medians[1]);
}

TEST_CASE("top eigenvalue estimate concentrates on ED data (Monte Carlo)") {
  std::vector<double> rel_errors;
  for (int seed = 0; seed < 20; ++seed) {
    SimDesign design;
    design.n = 10000;
    design.l = 256;
    design.seed = 7000 + seed;
    const FunctionalDataset ds = center(synth_dataset(design));
    const SpectralModel model = fpca_full(ds, 1);
    rel_errors.push_back(std::abs(model.eigenvalues()(0) - std::exp2(50.0)) / std::exp2(50.0));
  }
  CHECK(testutil::median(rel_errors) <= 0.05);
}

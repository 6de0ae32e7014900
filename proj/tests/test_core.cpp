#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "funss/dataset.hpp"
#include "funss/errors.hpp"
#include "funss/grid.hpp"
#include "funss/rfpca.hpp"
#include "funss/simgen.hpp"
#include "funss/spectral.hpp"
#include "testutil.hpp"

using namespace funss;

TEST_CASE("uniform grid invariants") {
  const Grid g = Grid::uniform(0.0, 1.0, 128);
  CHECK(g.size() == 128);
  CHECK(g.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
  const Grid g2 = Grid::uniform(-2.0, 5.0, 97);
  CHECK(g2.weights().sum() == doctest::Approx(7.0).epsilon(1e-12));
  for (int i = 1; i < g2.size(); ++i) CHECK(g2.points()(i) > g2.points()(i - 1));

  Eigen::VectorXd bad_pts(3), w(3);
  bad_pts << 0.0, 1.0, 1.0;
  w.setOnes();
  CHECK_THROWS_AS(Grid(bad_pts, w), DataError);
  Eigen::VectorXd pts(3), bad_w(3);
  pts << 0.0, 1.0, 2.0;
  bad_w << 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(Grid(pts, bad_w), DataError);
  CHECK_THROWS_AS(Grid(pts, w.head(2)), DimensionError);
}

TEST_CASE("inner_product basics") {
  const Grid g = Grid::uniform(0.0, 1.0, 64);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(64);
  const Eigen::VectorXd any = testutil::gaussian_matrix(64, 1, 1).col(0);
  CHECK(inner_product(zero, any, g) == 0.0);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(64);
  CHECK(inner_product(ones, ones, g) == doctest::Approx(1.0).epsilon(1e-12));

  // sin/cos orthogonality at high resolution, against the analytic integral 0
  const Grid fine = Grid::uniform(0.0, 1.0, 512);
  Eigen::VectorXd s(512), c(512);
  for (int i = 0; i < 512; ++i) {
    const double t = fine.points()(i);
    s(i) = std::numbers::sqrt2 * std::sin(2.0 * std::numbers::pi * t);
    c(i) = std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * t);
  }
  CHECK(std::abs(inner_product(s, c, fine)) <= 1e-6);

  CHECK_THROWS_AS(inner_product(zero.head(10), any, g), DimensionError);

  // positive definiteness on nonzero functions
  for (unsigned seed : {2u, 3u, 4u}) {
    const Eigen::VectorXd v = testutil::gaussian_matrix(64, 1, seed).col(0);
    CHECK(sq_norm(v, g) > 0.0);
  }
  // symmetry and bilinearity spot check
  const Eigen::VectorXd u = testutil::gaussian_matrix(64, 1, 5).col(0);
  const Eigen::VectorXd v = testutil::gaussian_matrix(64, 1, 6).col(0);
  CHECK(inner_product(u, v, g) == doctest::Approx(inner_product(v, u, g)).epsilon(1e-14));
  CHECK(inner_product(2.0 * u + v, v, g) ==
        doctest::Approx(2.0 * inner_product(u, v, g) + sq_norm(v, g)).epsilon(1e-12));
}

namespace {
bool column_means_small(const FunctionalDataset& ds) {
  double max_mean = 0.0;
  for (int j = 0; j < ds.l(); ++j) {
    max_mean = std::max(max_mean, std::abs(ds.values().col(j).mean()));
  }
  return max_mean <= 1e-10 * std::max(1e-300, ds.values().cwiseAbs().maxCoeff());
}
}  // namespace

TEST_CASE("center removes the column mean and is idempotent") {
  const FunctionalDataset raw = testutil::gaussian_dataset(5, 8, 21);
  const FunctionalDataset centered = center(raw);
  CHECK(centered.centered());

  // column sums recomputed directly
  for (int j = 0; j < 8; ++j) {
    double sum = 0.0;
    for (int n = 0; n < 5; ++n) sum += centered.values()(n, j);
    CHECK(std::abs(sum) <= 1e-12 * raw.values().cwiseAbs().maxCoeff() * 5);
  }
  const double scale = centered.values().cwiseAbs().maxCoeff();
  const FunctionalDataset twice = center(centered);
  CHECK((twice.values() - centered.values()).cwiseAbs().maxCoeff() <= 1e-12 * scale);

  // two equal rows center to zero rows
  Eigen::MatrixXd two(2, 4);
  two << 1.0, -2.0, 3.0, 0.5, 1.0, -2.0, 3.0, 0.5;
  const FunctionalDataset sym = center(FunctionalDataset(Grid::uniform(0, 1, 4), two));
  CHECK(sym.values().cwiseAbs().maxCoeff() == 0.0);

  // centered-flag invariant: column mean small relative to values
  CHECK(column_means_small(centered));
}

TEST_CASE("scores: identity on exact spectral data and the zero-eigenvalue convention") {
  const int l = 32, k = 4;
  const Grid g = Grid::uniform(0.0, 1.0, l);
  const Eigen::MatrixXd basis = fourier_basis(l, k);
  Eigen::VectorXd ev(k);
  ev << 9.0, 4.0, 1.0, 0.25;

  // rows n = sigma_n theta_n -> identity scores
  Eigen::MatrixXd rows(k, l);
  for (int r = 0; r < k; ++r) rows.row(r) = std::sqrt(ev(r)) * basis.row(r);
  const FunctionalDataset ds(g, rows);
  const SpectralModel model(ev, basis, g);
  const ScoreMatrix sm = compute_scores(ds, model, k);
  CHECK((sm.scores - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-10);

  // appending a zero eigenvalue gives a column of ones
  Eigen::VectorXd ev5(k + 1);
  ev5 << 9.0, 4.0, 1.0, 0.25, 0.0;
  Eigen::MatrixXd basis5(k + 1, l);
  basis5.topRows(k) = basis;
  basis5.row(k) = fourier_basis(l, k + 1).row(k);
  const SpectralModel model5(ev5, basis5, g);
  const ScoreMatrix sm5 = compute_scores(ds, model5, k + 1);
  CHECK((sm5.scores.col(k).array() - 1.0).abs().maxCoeff() == 0.0);

  // grid mismatch
  const FunctionalDataset other(Grid::uniform(0.0, 2.0, l), rows);
  CHECK_THROWS_AS(compute_scores(other, model, k), DimensionError);
}

TEST_CASE("full-rank KL reconstruction and Parseval") {
  const FunctionalDataset ds = testutil::gaussian_dataset(30, 12, 33, true);
  const SpectralModel model = fpca_full(ds, 12);
  const int rank = model.rank();
  const ScoreMatrix sm = compute_scores(ds, model, rank);

  Eigen::MatrixXd recon = Eigen::MatrixXd::Zero(30, 12);
  for (int r = 0; r < rank; ++r) {
    recon += std::sqrt(model.eigenvalues()(r)) * sm.scores.col(r) *
             model.eigenfunctions().row(r);
  }
  const double scale = ds.values().cwiseAbs().maxCoeff();
  CHECK((recon - ds.values()).cwiseAbs().maxCoeff() <= 1e-8 * scale);

  // Parseval across all positive ranks
  const Eigen::VectorXd norms = ds.row_sq_norms();
  for (int n = 0; n < 30; ++n) {
    double acc = 0.0;
    for (int r = 0; r < rank; ++r) {
      acc += model.eigenvalues()(r) * sm.scores(n, r) * sm.scores(n, r);
    }
    CHECK(std::abs(acc - norms(n)) <= 1e-8 * norms(n));
  }

  // score normalization ||xi_r||_N = 1
  for (int r = 0; r < rank; ++r) {
    const double norm_n = std::sqrt(sm.scores.col(r).squaredNorm() / 30.0);
    CHECK(norm_n == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("residual norms: in-span, empty projection, Parseval identity") {
  const int l = 24;
  const Grid g = Grid::uniform(0.0, 1.0, l);
  const Eigen::MatrixXd basis = fourier_basis(l, 3);

  // rank-3 synthetic data with known scores
  const Eigen::MatrixXd xi = testutil::gaussian_matrix(40, 3, 9);
  Eigen::VectorXd sig(3);
  sig << 4.0, 2.0, 1.0;
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(40, l);
  for (int r = 0; r < 3; ++r) values += std::sqrt(sig(r)) * xi.col(r) * basis.row(r);
  const FunctionalDataset ds(g, values);
  const SpectralModel model = fpca_full(ds, 3);
  REQUIRE(model.rank() == 3);

  const Eigen::VectorXd norms = ds.row_sq_norms();

  // R = 0 gives back the squared norms
  const Eigen::VectorXd r0 = residual_norms(ds, model, 0);
  CHECK((r0 - norms).cwiseAbs().maxCoeff() <= 1e-12 * norms.maxCoeff());

  // R = full rank: in-span residual vanishes
  const Eigen::VectorXd r3 = residual_norms(ds, model, 3);
  for (int n = 0; n < 40; ++n) CHECK(r3(n) <= 1e-10 * norms(n));

  // R = 2 equals sigma_3^2 xi_3^2 via the Parseval identity
  const ScoreMatrix sm = compute_scores(ds, model, 3);
  const Eigen::VectorXd r2 = residual_norms(ds, model, 2);
  for (int n = 0; n < 40; ++n) {
    const double expected = model.eigenvalues()(2) * sm.scores(n, 2) * sm.scores(n, 2);
    CHECK(std::abs(r2(n) - expected) <= 1e-8 * std::max(1.0, expected));
  }
}

TEST_CASE("projection idempotence") {
  const FunctionalDataset ds = testutil::gaussian_dataset(25, 16, 44, true);
  const SpectralModel model = fpca_full(ds, 5);
  const int r = 5;
  // apply P_R once and twice to every sample
  Eigen::MatrixXd once = Eigen::MatrixXd::Zero(25, 16);
  const Eigen::MatrixXd coeffs = projection_coeffs(ds, model, r);
  for (int k = 0; k < r; ++k) once += coeffs.col(k) * model.eigenfunctions().row(k);
  const FunctionalDataset projected(ds.grid(), once);
  const Eigen::MatrixXd coeffs2 = projection_coeffs(projected, model, r);
  Eigen::MatrixXd twice = Eigen::MatrixXd::Zero(25, 16);
  for (int k = 0; k < r; ++k) twice += coeffs2.col(k) * model.eigenfunctions().row(k);
  CHECK((twice - once).cwiseAbs().maxCoeff() <= 1e-10 * ds.values().cwiseAbs().maxCoeff());
}

TEST_CASE("spectral model validation") {
  const Grid g = Grid::uniform(0.0, 1.0, 8);
  Eigen::VectorXd bad(2);
  bad << 1.0, 2.0;  // increasing
  CHECK_THROWS_AS(SpectralModel(bad, Eigen::MatrixXd::Zero(2, 8), g), DataError);
  Eigen::VectorXd neg(1);
  neg << -0.5;
  CHECK_THROWS_AS(SpectralModel(neg, Eigen::MatrixXd::Zero(1, 8), g), DataError);
  CHECK_THROWS_AS(SpectralModel(Eigen::VectorXd::Ones(2), Eigen::MatrixXd::Zero(1, 8), g),
                  DimensionError);
}

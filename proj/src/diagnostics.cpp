#include "funss/diagnostics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Weighted modified Gram-Schmidt over the concatenated eigenfamilies.
/// Returns an orthonormal basis of the joint span, one function per row.
Eigen::MatrixXd joint_basis(const std::vector<const SpectralModel*>& models,
                            const std::vector<int>& counts, const Grid& grid) {
  const int l = grid.size();
  Eigen::MatrixXd basis(0, l);
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (int r = 0; r < counts[m]; ++r) {
      Eigen::VectorXd v = models[m]->eigenfunction(r);
      const double scale = std::sqrt(sq_norm(v, grid));
      for (int pass = 0; pass < 2; ++pass) {  // twice for numerical orthogonality
        for (Eigen::Index b = 0; b < basis.rows(); ++b) {
          const Eigen::VectorXd q = basis.row(b).transpose();
          v -= inner_product(q, v, grid) * q;
        }
      }
      const double norm = std::sqrt(sq_norm(v, grid));
      if (norm > 1e-10 * (scale > 0.0 ? scale : 1.0)) {
        basis.conservativeResize(basis.rows() + 1, l);
        basis.row(basis.rows() - 1) = v.transpose() / norm;
      }
    }
  }
  return basis;
}

/// Coefficients <q_i, theta_r> of a model's leading functions in the basis.
Eigen::MatrixXd basis_coeffs(const Eigen::MatrixXd& basis, const SpectralModel& model, int count,
                             const Grid& grid) {
  Eigen::MatrixXd coeffs(basis.rows(), count);
  for (int r = 0; r < count; ++r) {
    const Eigen::VectorXd th = model.eigenfunction(r);
    for (Eigen::Index b = 0; b < basis.rows(); ++b) {
      coeffs(b, r) = inner_product(basis.row(b).transpose(), th, grid);
    }
  }
  return coeffs;
}

OperatorNorms norms_of_symmetric(const Eigen::MatrixXd& sym) {
  OperatorNorms out;
  if (sym.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  out.op = es.eigenvalues().cwiseAbs().maxCoeff();
  out.hs = es.eigenvalues().norm();
  return out;
}

}  // namespace

SpectrumStats spectrum_stats(const SpectralModel& model, int r) {
  if (r < 1 || r > model.rank()) {
    throw DimensionError("spectrum_stats: rank out of range for the model");
  }
  const Eigen::VectorXd& ev = model.eigenvalues();
  SpectrumStats s;
  s.r = r;
  s.sigma1_sq = ev(0);
  s.sigma_r_sq = ev(r - 1);
  s.sigma_r1_sq = model.rank() > r ? ev(r) : 0.0;
  s.g_r = s.sigma_r_sq - s.sigma_r1_sq;
  s.eigengap_ok = s.g_r > 0.0;
  if (s.eigengap_ok) {
    s.big_g_r = s.sigma_r_sq / s.g_r;
    s.k_r = 15.0 * (1.0 + 2.0 * (s.sigma1_sq - s.sigma_r_sq) / (std::numbers::pi * s.g_r));
  } else {
    s.big_g_r = kInf;
    s.k_r = kInf;
  }
  if (s.sigma_r1_sq > 0.0) {
    s.delta_r = ev.tail(model.rank() - r).sum() / s.sigma_r1_sq;
  } else {
    s.delta_r = 0.0;
  }
  if (!(s.sigma1_sq > 0.0)) {
    throw DataError("spectrum_stats: zero operator has no intrinsic dimension");
  }
  s.delta0 = ev.sum() / s.sigma1_sq;
  return s;
}

OperatorNorms subspace_error(const SpectralModel& model_hat, const SpectralModel& model_tilde,
                             int r) {
  if (r < 0 || r > model_hat.rank() || r > model_tilde.rank()) {
    throw DimensionError("subspace_error: rank exceeds a model rank");
  }
  if (!model_hat.grid().same_as(model_tilde.grid())) {
    throw DimensionError("subspace_error: models live on different grids");
  }
  if (r == 0) return {};
  const Grid& grid = model_hat.grid();
  const Eigen::MatrixXd basis = joint_basis({&model_hat, &model_tilde}, {r, r}, grid);
  const Eigen::MatrixXd a = basis_coeffs(basis, model_hat, r, grid);
  const Eigen::MatrixXd b = basis_coeffs(basis, model_tilde, r, grid);
  return norms_of_symmetric(a * a.transpose() - b * b.transpose());
}

double eigfun_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta_tilde,
                    const Grid& grid) {
  const double sign = inner_product(theta_tilde, theta_hat, grid) < 0.0 ? -1.0 : 1.0;
  return std::sqrt(sq_norm(theta_tilde - sign * theta_hat, grid));
}

LinearTerm linear_term(const SpectralModel& model, const FunctionalDataset& dataset,
                       const SubsampleDraw& draw, int r) {
  const int rank = model.rank();
  if (r < 1 || r > rank) throw DimensionError("linear_term: rank out of range");
  const Eigen::VectorXd& ev = model.eigenvalues();
  const double gap = ev(r - 1) - (rank > r ? ev(r) : 0.0);
  if (!(gap > 0.0)) throw NumericalError("linear_term: zero eigengap at R");

  LinearTerm out;
  out.cross = Eigen::MatrixXd::Zero(r, rank - r);
  if (rank == r) return out;  // no residual directions, the term vanishes

  // Full-sample scores of the drawn rows across the whole spectrum.
  const ScoreMatrix all_scores = compute_scores(dataset, model, rank);
  const int c = static_cast<int>(draw.indices.size());
  const double n = static_cast<double>(dataset.n());
  Eigen::MatrixXd weighted(c, rank);
  for (int i = 0; i < c; ++i) {
    weighted.row(i) = all_scores.scores.row(draw.indices[i]) /
                      (static_cast<double>(c) * n * draw.probs(i));
  }
  Eigen::MatrixXd drawn(c, rank);
  for (int i = 0; i < c; ++i) drawn.row(i) = all_scores.scores.row(draw.indices[i]);

  // cross(a, b) = sum_c w_c sigma_a sigma_s / (sigma_a^2 - sigma_s^2) xi_ca xi_cs
  const Eigen::MatrixXd sums =
      weighted.leftCols(r).transpose() * drawn.rightCols(rank - r);  // R x (K-R)
  for (int a = 0; a < r; ++a) {
    for (int s = r; s < rank; ++s) {
      const double denom = ev(a) - ev(s);
      out.cross(a, s - r) = std::sqrt(ev(a) * ev(s)) / denom * sums(a, s - r);
    }
  }
  if (out.cross.size() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.cross);
    out.op_norm = svd.singularValues()(0);
    out.hs_norm = std::numbers::sqrt2 * out.cross.norm();
  }
  return out;
}

PerturbationReport perturbation_report(const FunctionalDataset& dataset,
                                       const SpectralModel& full_model,
                                       const SubsampleDraw& draw, int r) {
  PerturbationReport report;
  const Grid& grid = dataset.grid();

  const WeightedSketch sketch = cov_subsampled(dataset, draw);
  const OperatorNorms e =
      sym_diff_norms(cov_matrix_scaled(sketch, grid), cov_matrix_scaled(dataset));
  report.e_op = e.op;
  report.e_hs = e.hs;

  const SpectralModel tilde = spectral_from_rows(sketch.rows, grid, r);
  if (tilde.rank() < r) {
    throw NumericalError("perturbation_report: subsampled model rank deficient at R");
  }

  const LinearTerm lin = linear_term(full_model, dataset, draw, r);
  report.lr_op = lin.op_norm;

  // Everything below lives in the joint span of the full eigenbasis and the
  // subsampled leading functions.
  const int k = full_model.rank();
  const Eigen::MatrixXd basis = joint_basis({&full_model, &tilde}, {k, r}, grid);
  const Eigen::MatrixXd hat_coef = basis_coeffs(basis, full_model, k, grid);
  const Eigen::MatrixXd tilde_coef = basis_coeffs(basis, tilde, r, grid);

  const Eigen::MatrixXd p_hat =
      hat_coef.leftCols(r) * hat_coef.leftCols(r).transpose();
  const Eigen::MatrixXd p_tilde = tilde_coef * tilde_coef.transpose();
  const Eigen::MatrixXd diff = p_tilde - p_hat;

  Eigen::MatrixXd lin_block = Eigen::MatrixXd::Zero(k, k);
  lin_block.topRightCorner(r, k - r) = lin.cross;
  lin_block.bottomLeftCorner(k - r, r) = lin.cross.transpose();
  const Eigen::MatrixXd lin_mat = hat_coef * lin_block * hat_coef.transpose();

  const OperatorNorms proj = norms_of_symmetric(diff);
  report.proj_op = proj.op;
  report.proj_hs = proj.hs;
  report.sr_op = norms_of_symmetric(diff - lin_mat).op;
  return report;
}

BoundResult fpca_bound(const SpectrumStats& stats, double beta, long c, double eps) {
  if (!stats.eigengap_ok) throw NumericalError("fpca_bound: eigengap is not positive");
  if (!(beta >= 1.0)) throw ParameterError("fpca_bound: beta must be >= 1");
  if (!(eps > 0.0)) throw ParameterError("fpca_bound: eps must be positive");
  const double dim = static_cast<double>(stats.r) + stats.delta_r;
  const double z = beta * dim;
  const double v = std::max(stats.big_g_r * stats.big_g_r * z * z / (2.0 * beta), z);
  const double lf = std::max(stats.big_g_r * z / std::numbers::sqrt2, z + 1.0);
  const double cd = static_cast<double>(c);

  BoundResult out;
  out.error_bound =
      eps + stats.k_r * stats.sigma1_sq * stats.sigma1_sq * eps * eps / (stats.g_r * stats.g_r);
  const double tail = 12.0 * dim * std::exp(-(cd * eps * eps / 2.0) / (v + lf * eps / 3.0));
  out.success_prob = std::min(1.0, std::max(0.0, 1.0 - tail));
  // eps * C >= sqrt(C V) + L/3, written in the same per-C form as the
  // threshold helper so the boundary case is included exactly
  out.eps_feasible = eps >= std::sqrt(v / cd) + lf / (3.0 * cd);
  return out;
}

BoundResult flr_bound(const SpectrumStats& stats, double beta, long c, double eps, double y_norm,
                      double yperp_norm) {
  if (!stats.eigengap_ok) throw NumericalError("flr_bound: eigengap is not positive");
  if (!(beta >= 1.0)) throw ParameterError("flr_bound: beta must be >= 1");
  if (!(eps > 0.0)) throw ParameterError("flr_bound: eps must be positive");
  const double dim = static_cast<double>(stats.r) + stats.delta_r;
  const double z1 = std::pow(stats.sigma1_sq, 3) * stats.k_r /
                    (stats.g_r * stats.g_r * stats.sigma_r_sq);
  const double z2 = beta * dim;
  const double v = 2.0 + (2.0 + stats.big_g_r * stats.big_g_r) * z2 * z2 / beta;
  const double lf = std::sqrt(2.0 * static_cast<double>(stats.r)) +
                    (std::numbers::sqrt2 + stats.big_g_r / std::numbers::sqrt2) * z2;
  const double cd = static_cast<double>(c);

  BoundResult out;
  const double sigma_ratio = std::sqrt(stats.sigma_r_sq / stats.sigma1_sq);
  out.error_bound = (eps + sigma_ratio * z1 * eps * eps) * y_norm +
                    4.0 * (eps + z1 * eps * eps) * yperp_norm;
  const double tail = 16.0 * dim * std::exp(-cd * eps * eps / (v + lf * eps / 3.0)) +
                      3.0 * z2 / (eps * eps * cd);
  out.success_prob = std::min(1.0, std::max(0.0, 1.0 - tail));
  out.eps_feasible =
      eps >= std::sqrt(v / cd) + lf / (3.0 * cd) && eps <= std::min(1.0, stats.g_r / 3.0);
  return out;
}

double fpca_eps_threshold(const SpectrumStats& stats, double beta, long c) {
  if (!stats.eigengap_ok) throw NumericalError("fpca_eps_threshold: eigengap is not positive");
  const double z = beta * (static_cast<double>(stats.r) + stats.delta_r);
  const double v = std::max(stats.big_g_r * stats.big_g_r * z * z / (2.0 * beta), z);
  const double lf = std::max(stats.big_g_r * z / std::numbers::sqrt2, z + 1.0);
  const double cd = static_cast<double>(c);
  return std::sqrt(v / cd) + lf / (3.0 * cd);
}

double flr_eps_threshold(const SpectrumStats& stats, double beta, long c) {
  if (!stats.eigengap_ok) throw NumericalError("flr_eps_threshold: eigengap is not positive");
  const double z2 = beta * (static_cast<double>(stats.r) + stats.delta_r);
  const double v = 2.0 + (2.0 + stats.big_g_r * stats.big_g_r) * z2 * z2 / beta;
  const double lf = std::sqrt(2.0 * static_cast<double>(stats.r)) +
                    (std::numbers::sqrt2 + stats.big_g_r / std::numbers::sqrt2) * z2;
  const double cd = static_cast<double>(c);
  return std::sqrt(v / cd) + lf / (3.0 * cd);
}

PilotBetaResult pilot_beta(const SpectrumStats& stats, long c) {
  if (!stats.eigengap_ok) throw NumericalError("pilot_beta: eigengap is not positive");
  const double dim = static_cast<double>(stats.r) + stats.delta_r;
  const double gamma0 = std::sqrt((stats.delta0 + 1.0) * std::log(120.0 * stats.delta0));
  const double gamma1 =
      35.0 * (1.0 + stats.big_g_r) * dim + 8.0 * stats.sigma1_sq * gamma0 / stats.sigma_r_sq;
  const double gamma2 = 32.0 * stats.k_r * std::pow(stats.sigma1_sq, 3) * stats.big_g_r *
                        stats.big_g_r / (stats.g_r * stats.g_r * stats.sigma_r_sq);
  const double cd = static_cast<double>(c);
  const double drift = gamma1 / std::sqrt(cd) + gamma2 / cd;
  PilotBetaResult out;
  if (drift >= 1.0) {
    out.value = kInf;
    out.finite = false;
    return out;
  }
  out.value = (1.0 + drift) / (1.0 - drift);
  out.finite = true;
  return out;
}

double fve_gap_bound(const PerturbationReport& report) { return report.proj_op; }

Eigen::MatrixXd cov_matrix_scaled(const FunctionalDataset& dataset) {
  const Eigen::VectorXd sqrt_w = dataset.grid().weights().cwiseSqrt();
  Eigen::MatrixXd scaled = dataset.values() / std::sqrt(static_cast<double>(dataset.n()));
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j) *= sqrt_w(j);
  return kernels::gram_cols(scaled);
}

Eigen::MatrixXd cov_matrix_scaled(const WeightedSketch& sketch, const Grid& grid) {
  const Eigen::VectorXd sqrt_w = grid.weights().cwiseSqrt();
  Eigen::MatrixXd scaled = sketch.rows;
  for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j) *= sqrt_w(j);
  return kernels::gram_cols(scaled);
}

OperatorNorms sym_diff_norms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("sym_diff_norms: shape mismatch");
  }
  const Eigen::MatrixXd diff = a - b;
  OperatorNorms out;
  out.hs = diff.norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(diff, Eigen::EigenvaluesOnly);
  out.op = es.eigenvalues().cwiseAbs().maxCoeff();
  return out;
}

}  // namespace funss

#pragma once

#include <Eigen/Core>

#include "funss/dataset.hpp"
#include "funss/rfpca.hpp"
#include "funss/sampling.hpp"
#include "funss/spectral.hpp"

namespace funss {

struct OperatorNorms {
  double op = 0.0;
  double hs = 0.0;
};

/// Spectrum summaries driving the concentration-bound formulas. All fields
/// are recomputable from the eigenvalues of the source model.
struct SpectrumStats {
  int r = 0;                 // subspace dimension the stats refer to
  double g_r = 0.0;          // eigengap sigma_R^2 - sigma_{R+1}^2
  double big_g_r = 0.0;      // sigma_R^2 / g_R
  double k_r = 0.0;          // 15 [1 + 2 (sigma_1^2 - sigma_R^2) / (pi g_R)]
  double delta_r = 0.0;      // intrinsic dimension of the residual spectrum
  double delta0 = 0.0;       // intrinsic dimension of the whole operator
  double sigma1_sq = 0.0;
  double sigma_r_sq = 0.0;
  double sigma_r1_sq = 0.0;  // sigma_{R+1}^2
  bool eigengap_ok = false;  // false flags g_R <= 0 (identifiability unmet)
};

SpectrumStats spectrum_stats(const SpectralModel& model, int r);

/// Operator and Hilbert-Schmidt norms of P_hat_R - P_tilde_R, computed in the
/// joint span of the two eigenfamilies (a <= 2R dimensional eigenproblem).
OperatorNorms subspace_error(const SpectralModel& model_hat, const SpectralModel& model_tilde,
                             int r);

/// Sign-aligned eigenfunction distance || theta_tilde - sign(<tilde, hat>) theta_hat ||.
double eigfun_error(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta_tilde,
                    const Grid& grid);

/// First-order perturbation term of the projection difference, kept as its
/// coefficient block over the full-sample eigenbasis: the operator is
/// sum_{r<=R} sum_{s>R} cross(r, s-R) [theta_r (x) theta_s + theta_s (x) theta_r].
struct LinearTerm {
  Eigen::MatrixXd cross;  // R x (K - R)
  double op_norm = 0.0;
  double hs_norm = 0.0;
};

LinearTerm linear_term(const SpectralModel& model, const FunctionalDataset& dataset,
                       const SubsampleDraw& draw, int r);

struct PerturbationReport {
  double e_op = 0.0;     // || C_tilde - C_hat ||
  double e_hs = 0.0;
  double lr_op = 0.0;    // || L_R(E) ||
  double sr_op = 0.0;    // || S_R(E) || with S_R = (P_tilde - P_hat) - L_R
  double proj_op = 0.0;  // || P_tilde - P_hat ||
  double proj_hs = 0.0;
};

/// Assembles the projection-difference decomposition for one draw. The model
/// must carry the full numerical spectrum of the dataset (all positive
/// eigenpairs), not just the leading R.
PerturbationReport perturbation_report(const FunctionalDataset& dataset,
                                       const SpectralModel& full_model,
                                       const SubsampleDraw& draw, int r);

struct BoundResult {
  double error_bound = 0.0;
  double success_prob = 0.0;  // clamped to [0, 1]; 0 carries no information
  bool eps_feasible = false;
};

/// Subspace-projection concentration bound: error eps + K_R sigma_1^4 eps^2 / g_R^2,
/// probability 1 - 12 (R + Delta_R) exp(-(C eps^2 / 2) / (V + L eps / 3)).
BoundResult fpca_bound(const SpectrumStats& stats, double beta, long c, double eps);

/// Regression prediction-error bound with the two response-scaled terms.
BoundResult flr_bound(const SpectrumStats& stats, double beta, long c, double eps, double y_norm,
                      double yperp_norm);

/// Smallest feasible eps for the two bounds at subsample size C (the
/// boundary of the side condition); used by the theory-overlay eps rule.
double fpca_eps_threshold(const SpectrumStats& stats, double beta, long c);
double flr_eps_threshold(const SpectrumStats& stats, double beta, long c);

struct PilotBetaResult {
  double value = 0.0;
  bool finite = false;  // false: denominator <= 0 at this C, value is +inf
};

/// Near-exactness factor of the two-step pilot probability as a function of
/// the pilot subsample size; decreasing in C and -> 1 as C -> infinity.
PilotBetaResult pilot_beta(const SpectrumStats& stats, long c);

/// Deterministic pathwise bound on |FVE_hat - FVE_tilde|.
double fve_gap_bound(const PerturbationReport& report);

/// L x L symmetric matrix representing the covariance operator in the
/// sqrt(w)-scaled coordinates. Diagnostic/benchmark use only (small L).
Eigen::MatrixXd cov_matrix_scaled(const FunctionalDataset& dataset);
Eigen::MatrixXd cov_matrix_scaled(const WeightedSketch& sketch, const Grid& grid);

/// Operator / HS norms of the difference of two symmetric matrices.
OperatorNorms sym_diff_norms(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace funss

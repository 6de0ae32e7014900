#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>

#include "funss/dataset.hpp"

namespace funss {

enum class EigenKind { kExponentialDecay, kPolynomialDecay };
enum class ScoreKind { kNearlyUniform, kModeratelyNonuniform, kVeryNonuniform };

/// Synthetic-design descriptor: x_n = sum_{r=1}^{K} sigma_r xi_{nr} theta_r on
/// a uniform grid over [0, 1].
struct SimDesign {
  EigenKind eigen_kind = EigenKind::kExponentialDecay;
  ScoreKind score_kind = ScoreKind::kNearlyUniform;
  int k = 50;
  int n = 2000;
  int l = 256;
  std::uint64_t seed = 0;
};

/// Fourier rows theta_r: sqrt(2) sin(2 pi r t) for odd r, sqrt(2) cos(2 pi r t)
/// for even r, sampled on the uniform midpoint grid of [0, 1]. Requires
/// 2K < L so the sampled rows stay orthonormal under the grid quadrature.
Eigen::MatrixXd fourier_basis(int l, int k);

/// ED: sigma_r^2 = 2^51 * 0.5^r.  PD: sigma_r^2 = 100 * r^{-1.5}.
Eigen::VectorXd eigen_schedule(EigenKind kind, int k);

/// i.i.d. score matrix. NU: standard normal. MN: t(3) scaled by 1/sqrt(3) to
/// unit variance. VN: raw t(1) draws; they have no finite variance to scale to.
Eigen::MatrixXd draw_scores(ScoreKind kind, int n, int k, std::uint64_t seed);

/// Assembled dataset, returned uncentered; centering is the caller's
/// preprocessing step.
FunctionalDataset synth_dataset(const SimDesign& design);

struct RegressionData {
  FunctionalDataset x;
  ResponseVector y;
  Eigen::VectorXd psi_true;  // sum of the K basis rows on the grid
};

/// Predictors from synth_dataset plus Y_n = <x_n, psi> + noise_sd * eps_n with
/// standard normal noise. noise_sd = 0 is the exact-response test hook.
RegressionData synth_regression(const SimDesign& design, double noise_sd = 1.0);

/// The four-coordinate motivating example: three fixed directions scaled by
/// (10, 2, 0.1) with standard normal scores, on a unit-weight grid.
FunctionalDataset toy_example(int n = 1000, std::uint64_t seed = 0);

EigenKind eigen_kind_from_string(const std::string& name);  // "ed" | "pd"
ScoreKind score_kind_from_string(const std::string& name);  // "nu" | "mn" | "vn"
std::string to_string(const SimDesign& design);

}  // namespace funss

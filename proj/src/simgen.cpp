#include "funss/simgen.hpp"

#include <cmath>
#include <numbers>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"
#include "funss/rng.hpp"

namespace funss {

Eigen::MatrixXd fourier_basis(int l, int k) {
  if (k < 1 || l < 2) throw ParameterError("fourier_basis: need K >= 1 and L >= 2");
  if (2 * k >= l) {
    throw ParameterError("fourier_basis: need L > 2K to resolve the highest frequency");
  }
  Eigen::MatrixXd basis(k, l);
  const double sqrt2 = std::numbers::sqrt2;
  for (int row = 0; row < k; ++row) {
    const int r = row + 1;
    for (int j = 0; j < l; ++j) {
      const double t = (static_cast<double>(j) + 0.5) / static_cast<double>(l);
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(r) * t;
      basis(row, j) = r % 2 == 1 ? sqrt2 * std::sin(phase) : sqrt2 * std::cos(phase);
    }
  }
  return basis;
}

Eigen::VectorXd eigen_schedule(EigenKind kind, int k) {
  if (k < 1) throw ParameterError("eigen_schedule: need K >= 1");
  Eigen::VectorXd out(k);
  for (int row = 0; row < k; ++row) {
    const double r = static_cast<double>(row + 1);
    if (kind == EigenKind::kExponentialDecay) {
      out(row) = std::exp2(51.0) * std::pow(0.5, r);
    } else {
      out(row) = 100.0 * std::pow(r, -1.5);
    }
  }
  return out;
}

Eigen::MatrixXd draw_scores(ScoreKind kind, int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1) throw ParameterError("draw_scores: need N >= 1 and K >= 1");
  rng::Xoshiro256ss gen(rng::derive_seed(seed, {static_cast<std::uint64_t>(kind)}));
  rng::NormalSampler normal(gen);
  Eigen::MatrixXd out(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) {
      switch (kind) {
        case ScoreKind::kNearlyUniform:
          out(i, j) = normal.next();
          break;
        case ScoreKind::kModeratelyNonuniform:
          out(i, j) = rng::student_t(normal, 3) / std::sqrt(3.0);
          break;
        case ScoreKind::kVeryNonuniform:
          out(i, j) = rng::student_t(normal, 1);
          break;
      }
    }
  }
  return out;
}

FunctionalDataset synth_dataset(const SimDesign& design) {
  const Eigen::MatrixXd basis = fourier_basis(design.l, design.k);
  const Eigen::VectorXd sigma_sq = eigen_schedule(design.eigen_kind, design.k);
  Eigen::MatrixXd scores = draw_scores(design.score_kind, design.n, design.k, design.seed);
  for (int j = 0; j < design.k; ++j) scores.col(j) *= std::sqrt(sigma_sq(j));
  return FunctionalDataset(Grid::uniform(0.0, 1.0, design.l),
                           kernels::matmul_rows(scores, basis), false);
}

RegressionData synth_regression(const SimDesign& design, double noise_sd) {
  FunctionalDataset x = synth_dataset(design);
  const Eigen::MatrixXd basis = fourier_basis(design.l, design.k);
  const Eigen::VectorXd psi = basis.colwise().sum().transpose();

  Eigen::VectorXd y = x.values() * psi.cwiseProduct(x.grid().weights());
  if (noise_sd != 0.0) {
    rng::Xoshiro256ss gen(rng::derive_seed(design.seed, {0x6e6f697365ULL}));  // "noise"
    rng::NormalSampler normal(gen);
    for (int i = 0; i < design.n; ++i) y(i) += noise_sd * normal.next();
  }
  return RegressionData{std::move(x), ResponseVector{std::move(y), false}, psi};
}

FunctionalDataset toy_example(int n, std::uint64_t seed) {
  if (n < 1) throw ParameterError("toy_example: need N >= 1");
  Eigen::VectorXd points(4), weights(4);
  points << 0.0, 1.0, 2.0, 3.0;
  weights.setOnes();
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXd dirs(3, 4);
  dirs << s, s, 0, 0,
          s, -s, 0, 0,
          0, 0, s, s;
  Eigen::VectorXd scale(3);
  scale << 10.0, 2.0, 0.1;

  rng::Xoshiro256ss gen(seed);
  rng::NormalSampler normal(gen);
  Eigen::MatrixXd scores(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) scores(i, j) = scale(j) * normal.next();
  }
  return FunctionalDataset(Grid(points, weights), scores * dirs, false);
}

EigenKind eigen_kind_from_string(const std::string& name) {
  if (name == "ed") return EigenKind::kExponentialDecay;
  if (name == "pd") return EigenKind::kPolynomialDecay;
  throw ParameterError("unknown eigenvalue schedule '" + name + "' (expected ed or pd)");
}

ScoreKind score_kind_from_string(const std::string& name) {
  if (name == "nu") return ScoreKind::kNearlyUniform;
  if (name == "mn") return ScoreKind::kModeratelyNonuniform;
  if (name == "vn") return ScoreKind::kVeryNonuniform;
  throw ParameterError("unknown score distribution '" + name + "' (expected nu, mn or vn)");
}

std::string to_string(const SimDesign& design) {
  std::string out = design.eigen_kind == EigenKind::kExponentialDecay ? "ed" : "pd";
  switch (design.score_kind) {
    case ScoreKind::kNearlyUniform: out += "+nu"; break;
    case ScoreKind::kModeratelyNonuniform: out += "+mn"; break;
    case ScoreKind::kVeryNonuniform: out += "+vn"; break;
  }
  out += " n=" + std::to_string(design.n) + " l=" + std::to_string(design.l) +
         " k=" + std::to_string(design.k);
  return out;
}

}  // namespace funss

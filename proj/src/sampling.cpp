#include "funss/sampling.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "funss/errors.hpp"
#include "funss/rfpca.hpp"

namespace funss {

namespace {

constexpr double kPilotProbFloor = 1e-15;

SamplingDistribution normalized(Eigen::VectorXd weights, SamplerKind kind) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DataError("sampling: degenerate distribution (nonpositive total mass)");
  }
  SamplingDistribution dist;
  dist.probs = weights / total;
  dist.kind = kind;
  return dist;
}

}  // namespace

AliasTable::AliasTable(const Eigen::VectorXd& probs) {
  const int n = static_cast<int>(probs.size());
  if (n < 1) throw DimensionError("alias table: empty distribution");
  threshold_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (int i = 0; i < n; ++i) {
    if (probs(i) < 0.0 || !std::isfinite(probs(i))) {
      throw DataError("alias table: invalid probability entry");
    }
    scaled[i] = probs(i) * n;
  }
  std::vector<int> small, large;
  small.reserve(n);
  large.reserve(n);
  for (int i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    const int g = large.back();
    small.pop_back();
    large.pop_back();
    threshold_[s] = scaled[s];
    alias_[s] = g;
    scaled[g] = (scaled[g] + scaled[s]) - 1.0;
    (scaled[g] < 1.0 ? small : large).push_back(g);
  }
  for (int i : large) {
    threshold_[i] = 1.0;
    alias_[i] = i;
  }
  for (int i : small) {
    // Only reachable through roundoff; the column is effectively full.
    threshold_[i] = 1.0;
    alias_[i] = i;
  }
}

int AliasTable::sample(rng::Xoshiro256ss& gen) const {
  const int n = static_cast<int>(threshold_.size());
  const double u = gen.uniform01() * n;
  int i = static_cast<int>(u);
  if (i >= n) i = n - 1;
  const double frac = u - static_cast<double>(i);
  return frac < threshold_[i] ? i : alias_[i];
}

SamplingDistribution prob_uniform(int n) {
  if (n < 1) throw ParameterError("prob_uniform: need n >= 1");
  SamplingDistribution dist;
  dist.probs = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  dist.kind = SamplerKind::kUniform;
  return dist;
}

SamplingDistribution prob_impo(const FunctionalDataset& dataset) {
  Eigen::VectorXd norms = dataset.row_sq_norms();
  if (!(norms.sum() > 0.0)) {
    throw DataError("prob_impo: all rows have zero norm");
  }
  return normalized(std::move(norms), SamplerKind::kImpo);
}

SamplingDistribution prob_mixture(const FunctionalDataset& dataset, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ParameterError("prob_mixture: alpha must lie in [0, 1]");
  }
  const int n = dataset.n();
  SamplingDistribution impo = prob_impo(dataset);
  SamplingDistribution dist;
  dist.probs = Eigen::VectorXd::Constant(n, alpha / static_cast<double>(n)) +
               (1.0 - alpha) * impo.probs;
  dist.kind = SamplerKind::kMixture;
  dist.alpha = alpha;
  return dist;
}

SamplingDistribution prob_funprinss_exact(const FunctionalDataset& dataset,
                                          const SpectralModel& model, int r) {
  if (r < 1 || r > model.rank()) {
    throw DimensionError("prob_funprinss_exact: rank out of range for the model");
  }
  const double sigma_r_sq = model.eigenvalues()(r - 1);
  if (!(sigma_r_sq > 0.0)) {
    throw NumericalError("prob_funprinss_exact: sigma_R^2 = 0 (rank deficient at R)");
  }
  const ScoreMatrix scores = compute_scores(dataset, model, r);
  const Eigen::VectorXd resid = residual_norms(dataset, model, r);
  Eigen::VectorXd numer =
      scores.scores.rowwise().squaredNorm() + resid / sigma_r_sq;
  const double total = numer.sum();

  // Sanity cap on the normalizing constant: with the model being
  // the full-sample FPCA of the dataset, total <= N (R + Delta_R).
  double delta_r = 0.0;
  if (model.rank() > r) {
    const double next = model.eigenvalues()(r);
    if (next > 0.0) {
      delta_r = model.eigenvalues().tail(model.rank() - r).sum() / next;
    }
  }
  const double cap = static_cast<double>(dataset.n()) * (static_cast<double>(r) + delta_r);
  if (total > cap * (1.0 + 1e-8)) {
    throw NumericalError(
        "prob_funprinss_exact: normalizing constant exceeds N(R + Delta_R); "
        "the model is not the full-sample FPCA of this dataset");
  }

  SamplingDistribution dist = normalized(std::move(numer), SamplerKind::kFunPrinSSExact);
  dist.rank = r;
  dist.normalizer = total;
  return dist;
}

SamplingDistribution estimate_funprinss(const FunctionalDataset& dataset, int c_pilot, int r,
                                        double alpha, std::uint64_t seed) {
  if (c_pilot < r + 1) {
    throw ParameterError("estimate_funprinss: pilot size must be at least R + 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("estimate_funprinss: alpha must lie in (0, 1)");
  }
  const SamplingDistribution pilot_dist = prob_mixture(dataset, alpha);
  const SpectralModel pilot = fpca_randomized(dataset, pilot_dist, c_pilot, r, seed);
  if (pilot.rank() < r || !(pilot.eigenvalues()(r - 1) > 0.0)) {
    throw NumericalError(
        "estimate_funprinss: pilot FPCA is rank deficient at R = " + std::to_string(r) +
        "; raise the pilot subsample size");
  }
  const double sigma_r_sq = pilot.eigenvalues()(r - 1);
  const ScoreMatrix scores = compute_scores(dataset, pilot, r);
  const Eigen::VectorXd resid = residual_norms(dataset, pilot, r);
  Eigen::VectorXd numer = scores.scores.rowwise().squaredNorm() + resid / sigma_r_sq;
  // Keep 1/(N p_n) finite downstream for samples with vanishing numerators.
  numer = numer.cwiseMax(kPilotProbFloor);

  SamplingDistribution dist = normalized(std::move(numer), SamplerKind::kFunPrinSSPilot);
  dist.rank = r;
  dist.alpha = alpha;
  dist.c_pilot = c_pilot;
  return dist;
}

SubsampleDraw draw_with_replacement(const SamplingDistribution& dist, int c,
                                    std::uint64_t seed) {
  if (c < 1) throw ParameterError("draw_with_replacement: need C >= 1");
  const AliasTable table(dist.probs);
  rng::Xoshiro256ss gen(seed);
  SubsampleDraw draw;
  draw.indices.resize(c);
  draw.probs.resize(c);
  draw.seed = seed;
  for (int i = 0; i < c; ++i) {
    const int idx = table.sample(gen);
    draw.indices[i] = idx;
    draw.probs(i) = dist.probs(idx);
  }
  return draw;
}

SubsampleDraw identity_draw(int n) {
  if (n < 1) throw ParameterError("identity_draw: need n >= 1");
  SubsampleDraw draw;
  draw.indices.resize(n);
  draw.probs = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int i = 0; i < n; ++i) draw.indices[i] = i;
  draw.seed = 0;
  return draw;
}

}  // namespace funss

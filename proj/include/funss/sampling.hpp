#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <vector>

#include "funss/dataset.hpp"
#include "funss/rng.hpp"
#include "funss/spectral.hpp"

namespace funss {

enum class SamplerKind {
  kUniform,
  kImpo,
  kMixture,
  kFunPrinSSExact,
  kFunPrinSSPilot,
};

/// Probability law over the N samples of a dataset. probs sums to one and is
/// entrywise nonnegative; the kind records how it was built.
struct SamplingDistribution {
  Eigen::VectorXd probs;
  SamplerKind kind = SamplerKind::kUniform;
  int rank = 0;        // R for the subspace-based kinds
  double alpha = std::numeric_limits<double>::quiet_NaN();  // mixture weight
  long c_pilot = 0;    // pilot subsample size for kFunPrinSSPilot
  // Denominator of the exact subspace probability before normalization;
  // NaN for every other kind.
  double normalizer = std::numeric_limits<double>::quiet_NaN();
};

/// C indices drawn with replacement plus the probability of each drawn index.
struct SubsampleDraw {
  std::vector<int> indices;
  Eigen::VectorXd probs;  // probs[c] = p_{indices[c]}
  std::uint64_t seed = 0;
};

/// Walker/Vose alias table: O(N) build, O(1) per categorical draw.
class AliasTable {
 public:
  explicit AliasTable(const Eigen::VectorXd& probs);
  int sample(rng::Xoshiro256ss& gen) const;

 private:
  std::vector<double> threshold_;
  std::vector<int> alias_;
};

SamplingDistribution prob_uniform(int n);

/// p_n proportional to ||x_n||^2 in the weighted norm.
SamplingDistribution prob_impo(const FunctionalDataset& dataset);

/// alpha * uniform + (1 - alpha) * impo.
SamplingDistribution prob_mixture(const FunctionalDataset& dataset, double alpha);

/// Subspace sampling probability from the full-sample spectral model:
/// p_n proportional to sum_{r<=R} xi_{nr}^2 + ||(I - P_R) x_n||^2 / sigma_R^2.
SamplingDistribution prob_funprinss_exact(const FunctionalDataset& dataset,
                                          const SpectralModel& model, int r);

/// Two-step pilot estimate of the subspace probability: mixture pilot draw,
/// pilot randomized FPCA of rank R, then the plug-in probability. Throws
/// NumericalError when the pilot spectrum is rank deficient at R.
SamplingDistribution estimate_funprinss(const FunctionalDataset& dataset, int c_pilot, int r,
                                        double alpha, std::uint64_t seed);

SubsampleDraw draw_with_replacement(const SamplingDistribution& dist, int c, std::uint64_t seed);

/// Deterministic draw visiting each of the n samples exactly once with
/// probability entries 1/n. Feeding it to the sketch reproduces the full
/// sample covariance exactly; used by tests and the no-subsampling limit.
SubsampleDraw identity_draw(int n);

}  // namespace funss

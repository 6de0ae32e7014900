#pragma once

#include <cstdint>
#include <initializer_list>

namespace funss::rng {

/// SplitMix64 step (Steele, Lea, Flood 2014). Used for seeding and for
/// deriving independent per-replicate streams; never used as a main stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mix a base seed with stream tags, e.g. derive_seed(seed, {sampler, c, rep}).
/// The chain is a fixed sequence of SplitMix64 absorptions, so the mapping
/// (seed, tags) -> stream is stable across platforms and runs.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

/// xoshiro256** 1.0 (Blackman & Vigna 2018). All draws in this project go
/// through this generator so that seed -> stream is bit-reproducible.
class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform double in [0, 1): top 53 bits of next() scaled by 2^-53.
  double uniform01();

  /// Uniform double in (0, 1): rejects exact zeros (needed under logs).
  double uniform01_open();

 private:
  std::uint64_t s_[4];
};

/// Standard normal via the Marsaglia polar method; caches the spare deviate.
class NormalSampler {
 public:
  explicit NormalSampler(Xoshiro256ss& gen) : gen_(gen) {}
  double next();

 private:
  Xoshiro256ss& gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Student t with integer df, built as N(0,1) / sqrt(chi2_df / df) where the
/// chi-square is a sum of df squared normals from the same stream.
double student_t(NormalSampler& normal, int df);

}  // namespace funss::rng

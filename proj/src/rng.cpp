#include "funss/rng.hpp"

#include <cmath>

namespace funss::rng {

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = seed ^ 0x6a09e667f3bcc908ULL;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t t : tags) {
    state ^= t;
    out = splitmix64(state);
  }
  return out;
}

Xoshiro256ss::Xoshiro256ss(std::uint64_t seed) {
  // Seed the four words from SplitMix64 as recommended by the authors.
  std::uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
  // An all-zero state is invalid; the SplitMix expansion cannot produce it
  // for four consecutive outputs, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t Xoshiro256ss::next() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256ss::uniform01() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xoshiro256ss::uniform01_open() {
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  return u;
}

double NormalSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * gen_.uniform01() - 1.0;
    v = 2.0 * gen_.uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double student_t(NormalSampler& normal, int df) {
  const double z = normal.next();
  double chi2 = 0.0;
  for (int i = 0; i < df; ++i) {
    const double w = normal.next();
    chi2 += w * w;
  }
  return z / std::sqrt(chi2 / static_cast<double>(df));
}

}  // namespace funss::rng

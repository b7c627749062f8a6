#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace pasmin {

/// splitmix64 step; used to derive well-separated substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a sequence of words into one seed. Pure function of its inputs, so
/// any (master_seed, n, replication, stream) cell can be reproduced in
/// isolation.
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
  std::uint64_t state = 0x6a09e667f3bcc909ULL;
  std::uint64_t acc = 0;
  for (std::uint64_t w : words) {
    state ^= w + 0x9e3779b97f4a7c15ULL + (state << 6) + (state >> 2);
    acc ^= splitmix64(state);
  }
  return acc;
}

/// Deterministic random stream with explicitly coded distributions, so the
/// draw sequence is identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; the paired draw is cached.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Zero-mean Laplace with the given scale (inverse CDF method).
  double laplace(double scale) {
    const double u = uniform01() - 0.5;
    const double mag = std::log(1.0 - 2.0 * std::abs(u));
    return u >= 0.0 ? -scale * mag : scale * mag;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pasmin

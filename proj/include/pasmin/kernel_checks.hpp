#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pasmin/kernel.hpp"
#include "pasmin/rng.hpp"

namespace pasmin {

/// Radical-inverse / Halton points; deterministic low-discrepancy stream for
/// the normalization check.
inline double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double scale = inv;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % static_cast<std::uint64_t>(base)) * scale;
    index /= static_cast<std::uint64_t>(base);
    scale *= inv;
  }
  return value;
}

/// Quasi-Monte Carlo estimate of the kernel mass over [-1, 1]^d.
inline double kernel_mass_estimate(const Kernel& kernel, int points = 1 << 16) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13};
  const int d = kernel.dim();
  std::vector<double> u(static_cast<std::size_t>(d));
  double sum = 0.0;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < d; ++j) {
      u[static_cast<std::size_t>(j)] =
          2.0 * radical_inverse(static_cast<std::uint64_t>(i) + 1,
                                primes[std::min(j, 5)]) - 1.0;
    }
    sum += kernel(u);
  }
  const double volume = std::pow(2.0, d);
  return volume * sum / points;
}

/// Largest kernel value found outside the unit ball over random probes;
/// exactly zero for a compactly supported kernel.
inline double max_value_outside_support(const Kernel& kernel, int probes = 10000,
                                        std::uint64_t seed = 0x5eedu) {
  Rng rng(seed);
  const int d = kernel.dim();
  std::vector<double> u(static_cast<std::size_t>(d));
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) {
      u[static_cast<std::size_t>(j)] = rng.uniform(-3.0, 3.0);
      r2 += u[static_cast<std::size_t>(j)] * u[static_cast<std::size_t>(j)];
    }
    if (r2 <= 1.0) continue;
    worst = std::max(worst, kernel(u));
  }
  return worst;
}

/// Maximum difference quotient |K(x) - K(y)| / ||x - y|| over random pairs;
/// must stay below the kernel's stored Lipschitz bound.
inline double empirical_lipschitz(const Kernel& kernel, int pairs = 10000,
                                  std::uint64_t seed = 0x11b5eedu) {
  Rng rng(seed);
  const int d = kernel.dim();
  std::vector<double> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    double dist2 = 0.0;
    for (int j = 0; j < d; ++j) {
      a[static_cast<std::size_t>(j)] = rng.uniform(-1.2, 1.2);
      b[static_cast<std::size_t>(j)] = rng.uniform(-1.2, 1.2);
      const double diff = a[static_cast<std::size_t>(j)] - b[static_cast<std::size_t>(j)];
      dist2 += diff * diff;
    }
    if (dist2 <= 0.0) continue;
    const double quotient = std::abs(kernel(a) - kernel(b)) / std::sqrt(dist2);
    worst = std::max(worst, quotient);
  }
  return worst;
}

}  // namespace pasmin

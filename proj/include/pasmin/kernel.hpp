#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pasmin {

/// Smoothing kernel shapes. All are radial, nonnegative, normalized to unit
/// mass over R^d, Lipschitz, and supported in the closed unit Euclidean ball.
enum class KernelFamily {
  Quartic,    ///< c (1 - ||u||^2)^2
  Triweight,  ///< c (1 - ||u||^2)^3
  Cone,       ///< c (1 - ||u||)
};

inline std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Quartic: return "quartic";
    case KernelFamily::Triweight: return "triweight";
    case KernelFamily::Cone: return "cone";
  }
  return "?";
}

inline KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "quartic") return KernelFamily::Quartic;
  if (name == "triweight") return KernelFamily::Triweight;
  if (name == "cone") return KernelFamily::Cone;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

/// Volume of the unit Euclidean ball in R^d.
inline double unit_ball_volume(int dim) {
  return std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

/// Shape-only kernel: the bandwidth lives with the local fit, not here.
/// The normalization constant and the Lipschitz bound are computed in closed
/// form at construction.
class Kernel {
 public:
  Kernel(KernelFamily family, int dim) : family_(family), dim_(dim) {
    if (dim < 1) throw std::invalid_argument("Kernel: dim must be >= 1");
    const double v = unit_ball_volume(dim);
    switch (family) {
      case KernelFamily::Quartic: {
        // integral over the ball of (1-r^2)^p: V_d * d * B(d/2, p+1) / 2
        norm_c_ = 1.0 / (v * dim * std::beta(0.5 * dim, 3.0) / 2.0);
        // sup ||grad|| of c(1-r^2)^2 is 4 c r (1-r^2) at r = 1/sqrt(3)
        lipschitz_ = 8.0 * norm_c_ / (3.0 * std::sqrt(3.0));
        break;
      }
      case KernelFamily::Triweight: {
        norm_c_ = 1.0 / (v * dim * std::beta(0.5 * dim, 4.0) / 2.0);
        // sup of 6 c r (1-r^2)^2 is at r = 1/sqrt(5)
        lipschitz_ = 96.0 * norm_c_ / (25.0 * std::sqrt(5.0));
        break;
      }
      case KernelFamily::Cone: {
        // integral of (1 - r) over the ball is V_d / (d + 1)
        norm_c_ = (dim + 1.0) / v;
        lipschitz_ = norm_c_;
        break;
      }
    }
  }

  KernelFamily family() const { return family_; }
  int dim() const { return dim_; }
  double normalization() const { return norm_c_; }
  double lipschitz_bound() const { return lipschitz_; }

  /// Kernel value as a function of the squared norm of the argument.
  /// Zero outside the closed unit ball (value vanishes on the boundary).
  double value_at_r2(double squared_norm) const {
    if (squared_norm >= 1.0) return 0.0;
    const double s = 1.0 - squared_norm;
    switch (family_) {
      case KernelFamily::Quartic: return norm_c_ * s * s;
      case KernelFamily::Triweight: return norm_c_ * s * s * s;
      case KernelFamily::Cone: return norm_c_ * (1.0 - std::sqrt(squared_norm));
    }
    return 0.0;
  }

  double operator()(std::span<const double> u) const {
    double r2 = 0.0;
    for (double c : u) r2 += c * c;
    return value_at_r2(r2);
  }

 private:
  KernelFamily family_;
  int dim_;
  double norm_c_ = 0.0;
  double lipschitz_ = 0.0;
};

}  // namespace pasmin

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace pasmin {

/// Smooth compactly supported bump machinery used by the perturbed-quadratic
/// test objectives.
///
///   eta  — C-infinity ramp profile: 0 outside [0, 1/2], 1 on [1/8, 3/8],
///          built from the exp(-1/t) mollifier smoothstep.
///   psi  — antiderivative of eta(y + 1/2) - eta(y); vanishes outside
///          (-1/2, 1/2), peaks at 0 with psi(0) = integral of eta.
///   phi  — tensor product of psi over coordinates.
///
/// psi is tabulated once on a uniform grid (step 1e-3) by per-cell Simpson
/// quadrature and evaluated with cubic Hermite interpolation using the exact
/// derivative; the combined error is far below 1e-6.
class BumpFunctions {
 public:
  BumpFunctions() {
    table_.resize(static_cast<std::size_t>(cells_) + 1, 0.0);
    double acc = 0.0;
    for (int i = 0; i < cells_; ++i) {
      const double a = t0_ + i * dt_;
      acc += simpson_cell(a, a + dt_);
      table_[static_cast<std::size_t>(i) + 1] = acc;
    }
  }

  /// Shared immutable instance; the table is built on first use.
  static const BumpFunctions& shared() {
    static const BumpFunctions instance;
    return instance;
  }

  double eta(double x) const {
    if (x <= 0.0 || x >= 0.5) return 0.0;
    if (x < 0.125) return smoothstep(8.0 * x);
    if (x <= 0.375) return 1.0;
    return smoothstep(8.0 * (0.5 - x));
  }

  /// Derivative of psi: eta(y + 1/2) - eta(y).
  double eta_step(double y) const { return eta(y + 0.5) - eta(y); }

  double psi(double t) const {
    if (t <= t0_) return 0.0;
    if (t >= 0.5) return 0.0;  // total mass of eta_step is zero
    const double pos = (t - t0_) / dt_;
    int cell = static_cast<int>(pos);
    if (cell >= cells_) cell = cells_ - 1;
    const double a = t0_ + cell * dt_;
    const double s = (t - a) / dt_;
    const double p0 = table_[static_cast<std::size_t>(cell)];
    const double p1 = table_[static_cast<std::size_t>(cell) + 1];
    const double m0 = eta_step(a) * dt_;
    const double m1 = eta_step(a + dt_) * dt_;
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * p0 + (s3 - 2.0 * s2 + s) * m0 +
           (-2.0 * s3 + 3.0 * s2) * p1 + (s3 - s2) * m1;
  }

  /// psi(0), the total mass of eta.
  double psi0() const { return psi(0.0); }

  double phi(std::span<const double> x) const {
    double p = 1.0;
    for (double c : x) p *= psi(c);
    return p;
  }

  /// Exact bound on |eta'| (attained mid-ramp); bounds the curvature of psi.
  static constexpr double derivative_bound() { return 16.0; }

  /// Gershgorin bound on the Hessian norm of phi in dimension d, using
  /// |psi| <= psi(0), |psi'| <= 1, |psi''| <= derivative_bound().
  double hessian_bound(int dim) const {
    const double p0 = psi0();
    double bound = derivative_bound() * std::pow(p0, dim - 1);
    if (dim >= 2) bound += (dim - 1) * std::pow(p0, dim - 2);
    return bound;
  }

 private:
  static double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

  static double smoothstep(double t) {
    const double a = mollifier(t);
    const double b = mollifier(1.0 - t);
    const double sum = a + b;
    if (sum <= 0.0) return t <= 0.0 ? 0.0 : 1.0;
    return a / sum;
  }

  double simpson_cell(double a, double b) const {
    // composite Simpson with 4 subintervals; the integrand is smooth
    const double h = (b - a) / 4.0;
    double sum = eta_step(a) + eta_step(b);
    sum += 4.0 * (eta_step(a + h) + eta_step(a + 3.0 * h));
    sum += 2.0 * eta_step(a + 2.0 * h);
    return sum * h / 3.0;
  }

  static constexpr double t0_ = -0.5;
  static constexpr double dt_ = 1e-3;
  static constexpr int cells_ = 1000;
  std::vector<double> table_;
};

}  // namespace pasmin

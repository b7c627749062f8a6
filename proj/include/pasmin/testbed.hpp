#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pasmin/bump_functions.hpp"
#include "pasmin/domain.hpp"
#include "pasmin/errors.hpp"
#include "pasmin/kernel.hpp"
#include "pasmin/observations.hpp"
#include "pasmin/rng.hpp"

namespace pasmin {

enum class ObjectiveFamily {
  Quadratic,
  ShiftedQuadratic,
  QuadraticPlusBump,
  CosinePerturbedQuadratic,
};

/// Synthetic objective with ground truth: minimizer, minimum value, strong
/// convexity modulus, and the smoothness the scenario claims for it.
/// Immutable after construction; gradients are analytic.
class Objective {
 public:
  /// f(x) = a (1 + delta) ||x||^2 / 2.
  static Objective quadratic(int dim, double alpha, double delta = 0.0) {
    check_common(dim, alpha);
    Objective f;
    f.family_ = ObjectiveFamily::Quadratic;
    f.dim_ = dim;
    f.alpha_ = alpha;
    f.delta_ = delta;
    f.minimizer_ = Eigen::VectorXd::Zero(dim);
    f.minimum_ = 0.0;
    f.strong_convexity_ = alpha * (1.0 + delta);
    f.beta_claimed_ = 2.0;
    return f;
  }

  /// f(x) = a (1 + delta) ||x - center||^2 / 2 + offset.
  static Objective shifted_quadratic(int dim, double alpha, Eigen::VectorXd center,
                                     double offset, double delta = 0.0) {
    check_common(dim, alpha);
    if (center.size() != dim) throw ConfigError("shifted_quadratic: center dimension mismatch");
    Objective f = quadratic(dim, alpha, delta);
    f.family_ = ObjectiveFamily::ShiftedQuadratic;
    f.center_ = std::move(center);
    f.offset_ = offset;
    f.minimizer_ = f.center_;
    f.minimum_ = offset;
    return f;
  }

  /// The perturbed pair member: the base quadratic plus a smooth bump of
  /// height r h^beta at scale h = n^{-1/(2 beta + d)}, displaced along the
  /// first axis. Both the minimizer and the minimum value are known in
  /// closed form in the regime where the bump ramp is flat at the optimum,
  /// which the constructor enforces.
  static Objective quadratic_plus_bump(int dim, double alpha, double delta, double r,
                                       double beta, std::int64_t n) {
    check_common(dim, alpha);
    if (!(beta >= 2.0)) throw ConfigError("quadratic_plus_bump: beta must be >= 2");
    if (n < 2) throw ConfigError("quadratic_plus_bump: n must be >= 2");
    if (r < 0.0) throw ConfigError("quadratic_plus_bump: r must be >= 0");
    Objective f = quadratic(dim, alpha, delta);
    f.family_ = ObjectiveFamily::QuadraticPlusBump;
    f.bumps_ = &BumpFunctions::shared();
    f.r_ = r;
    f.beta_claimed_ = beta;
    f.bump_beta_ = beta;
    f.scale_h_ = std::pow(static_cast<double>(n), -1.0 / (2.0 * beta + dim));
    f.bump_center_ = Eigen::VectorXd::Zero(dim);
    f.bump_center_[0] = f.scale_h_ / 8.0;

    const double a = alpha * (1.0 + delta);
    const double psi0 = f.bumps_->psi0();
    const double psi0_pow = std::pow(psi0, dim - 1);
    const double shift = r * psi0_pow * std::pow(f.scale_h_, beta - 2.0) / a;
    if (!(shift <= 0.25)) {
      throw ConfigError("quadratic_plus_bump: r too large for the closed-form minimizer");
    }
    // strict convexity: the bump curvature r h^{beta-2} sup|hess phi| must
    // stay below the quadratic curvature
    const double curvature_slack =
        a - r * std::pow(f.scale_h_, beta - 2.0) * f.bumps_->hessian_bound(dim);
    if (!(curvature_slack > 0.0)) {
      throw ConfigError("quadratic_plus_bump: r too large, perturbed function may lose convexity");
    }
    f.strong_convexity_ = curvature_slack;

    f.minimizer_ = Eigen::VectorXd::Zero(dim);
    f.minimizer_[0] = -shift * f.scale_h_;
    f.minimum_ = 0.5 * shift * shift * f.scale_h_ * f.scale_h_ * a +
                 r * std::pow(f.scale_h_, beta) * psi0_pow *
                     f.bumps_->psi(-0.125 - shift);
    return f;
  }

  /// f(x) = quad ||x - center||^2 / 2 + eps prod_j cos(omega (x_j - c_j)) + offset
  /// with eps < 0, so the perturbation is minimized exactly at the center.
  static Objective cosine_perturbed_quadratic(int dim, double quad, double eps, double omega,
                                              Eigen::VectorXd center = Eigen::VectorXd(),
                                              double offset = 0.0) {
    if (dim < 1) throw ConfigError("cosine_perturbed_quadratic: dim must be >= 1");
    if (!(quad > 0.0)) throw ConfigError("cosine_perturbed_quadratic: quad must be > 0");
    if (!(eps < 0.0)) throw ConfigError("cosine_perturbed_quadratic: eps must be < 0");
    const double modulus = quad - std::abs(eps) * omega * omega * dim;
    if (!(modulus > 0.0)) {
      throw ConfigError("cosine_perturbed_quadratic: |eps| omega^2 d must stay below quad");
    }
    Objective f;
    f.family_ = ObjectiveFamily::CosinePerturbedQuadratic;
    f.dim_ = dim;
    f.alpha_ = quad;
    f.eps_ = eps;
    f.omega_ = omega;
    f.center_ = center.size() == 0 ? Eigen::VectorXd::Zero(dim) : std::move(center);
    if (f.center_.size() != dim) throw ConfigError("cosine_perturbed_quadratic: center dimension mismatch");
    f.offset_ = offset;
    f.minimizer_ = f.center_;
    f.minimum_ = eps + offset;
    f.strong_convexity_ = modulus;
    f.beta_claimed_ = 2.0;  // C-infinity; override via claim_beta for scenarios
    return f;
  }

  /// Scenarios may tune the estimator for a higher smoothness than the
  /// default conservative claim.
  Objective& claim_beta(double beta) {
    beta_claimed_ = beta;
    return *this;
  }

  ObjectiveFamily family() const { return family_; }
  int dim() const { return dim_; }
  const Eigen::VectorXd& minimizer() const { return minimizer_; }
  double minimum() const { return minimum_; }
  double strong_convexity() const { return strong_convexity_; }
  double beta_claimed() const { return beta_claimed_; }

  double operator()(std::span<const double> x) const {
    switch (family_) {
      case ObjectiveFamily::Quadratic: {
        double q = 0.0;
        for (double c : x) q += c * c;
        return 0.5 * alpha_ * (1.0 + delta_) * q;
      }
      case ObjectiveFamily::ShiftedQuadratic: {
        double q = 0.0;
        for (int j = 0; j < dim_; ++j) {
          const double c = x[static_cast<std::size_t>(j)] - center_[j];
          q += c * c;
        }
        return 0.5 * alpha_ * (1.0 + delta_) * q + offset_;
      }
      case ObjectiveFamily::QuadraticPlusBump: {
        double q = 0.0;
        double bump = 1.0;
        for (int j = 0; j < dim_; ++j) {
          const double c = x[static_cast<std::size_t>(j)];
          q += c * c;
          bump *= bumps_->psi((c - bump_center_[j]) / scale_h_);
        }
        return 0.5 * alpha_ * (1.0 + delta_) * q +
               r_ * std::pow(scale_h_, bump_beta_) * bump;
      }
      case ObjectiveFamily::CosinePerturbedQuadratic: {
        double q = 0.0;
        double prod = 1.0;
        for (int j = 0; j < dim_; ++j) {
          const double c = x[static_cast<std::size_t>(j)] - center_[j];
          q += c * c;
          prod *= std::cos(omega_ * c);
        }
        return 0.5 * alpha_ * q + eps_ * prod + offset_;
      }
    }
    return 0.0;
  }

  double operator()(const Eigen::VectorXd& x) const {
    return (*this)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    switch (family_) {
      case ObjectiveFamily::Quadratic:
        return alpha_ * (1.0 + delta_) * x;
      case ObjectiveFamily::ShiftedQuadratic:
        return alpha_ * (1.0 + delta_) * (x - center_);
      case ObjectiveFamily::QuadraticPlusBump: {
        Eigen::VectorXd g = alpha_ * (1.0 + delta_) * x;
        std::vector<double> psis(static_cast<std::size_t>(dim_));
        for (int j = 0; j < dim_; ++j) {
          psis[static_cast<std::size_t>(j)] = bumps_->psi((x[j] - bump_center_[j]) / scale_h_);
        }
        const double amp = r_ * std::pow(scale_h_, bump_beta_ - 1.0);
        for (int j = 0; j < dim_; ++j) {
          double partial = bumps_->eta_step((x[j] - bump_center_[j]) / scale_h_);
          for (int k = 0; k < dim_; ++k) {
            if (k != j) partial *= psis[static_cast<std::size_t>(k)];
          }
          g[j] += amp * partial;
        }
        return g;
      }
      case ObjectiveFamily::CosinePerturbedQuadratic: {
        Eigen::VectorXd g = alpha_ * (x - center_);
        std::vector<double> cosines(static_cast<std::size_t>(dim_));
        for (int j = 0; j < dim_; ++j) cosines[static_cast<std::size_t>(j)] = std::cos(omega_ * (x[j] - center_[j]));
        for (int j = 0; j < dim_; ++j) {
          double partial = -omega_ * std::sin(omega_ * (x[j] - center_[j]));
          for (int k = 0; k < dim_; ++k) {
            if (k != j) partial *= cosines[static_cast<std::size_t>(k)];
          }
          g[j] += eps_ * partial;
        }
        return g;
      }
    }
    return Eigen::VectorXd::Zero(dim_);
  }

 private:
  Objective() = default;

  static void check_common(int dim, double alpha) {
    if (dim < 1) throw ConfigError("Objective: dim must be >= 1");
    if (!(alpha > 0.0)) throw ConfigError("Objective: alpha must be > 0");
  }

  ObjectiveFamily family_ = ObjectiveFamily::Quadratic;
  int dim_ = 1;
  double alpha_ = 1.0;        // quadratic coefficient (per family convention)
  double delta_ = 0.0;
  double r_ = 0.0;            // bump amplitude factor
  double beta_claimed_ = 2.0;
  double bump_beta_ = 2.0;    // exponent of the bump amplitude
  double scale_h_ = 1.0;      // bump length scale
  double eps_ = 0.0;          // cosine amplitude, negative
  double omega_ = 1.0;        // cosine frequency
  double offset_ = 0.0;
  Eigen::VectorXd center_;
  Eigen::VectorXd bump_center_;
  Eigen::VectorXd minimizer_;
  double minimum_ = 0.0;
  double strong_convexity_ = 0.0;
  const BumpFunctions* bumps_ = nullptr;
};

enum class DesignFamily { UniformBox, TruncatedGaussian };

/// Sampling density of the design points. The support covers the constraint
/// set inflated by `margin` (default 1), on which the density is bounded
/// away from zero and infinity; p_min and p_max record those bounds.
class DesignDensity {
 public:
  static DesignDensity uniform_box(const Domain& theta, double margin = 1.0) {
    DesignDensity d;
    d.family_ = DesignFamily::UniformBox;
    d.theta_ = theta;
    d.margin_ = margin;
    auto [lo, hi] = theta.inflated_bounds(margin);
    d.lower_ = lo;
    d.upper_ = hi;
    double vol = 1.0;
    for (int j = 0; j < lo.size(); ++j) vol *= hi[j] - lo[j];
    d.p_min_ = d.p_max_ = 1.0 / vol;
    return d;
  }

  static DesignDensity truncated_gaussian(const Domain& theta, Eigen::VectorXd mean,
                                          double sigma, double margin = 1.0) {
    if (!(sigma > 0.0)) throw ConfigError("truncated_gaussian: sigma must be > 0");
    if (mean.size() != theta.dim()) throw ConfigError("truncated_gaussian: mean dimension mismatch");
    DesignDensity d;
    d.family_ = DesignFamily::TruncatedGaussian;
    d.theta_ = theta;
    d.margin_ = margin;
    d.mean_ = std::move(mean);
    d.sigma_ = sigma;
    auto [lo, hi] = theta.inflated_bounds(margin);
    d.lower_ = lo;
    d.upper_ = hi;

    const int dim = theta.dim();
    // acceptance mass of the inflated set, Monte Carlo with a fixed stream
    Rng rng(0x7ab11c5eedu);
    const int draws = 1 << 18;
    int inside = 0;
    Eigen::VectorXd g(dim);
    for (int i = 0; i < draws; ++i) {
      for (int j = 0; j < dim; ++j) g[j] = d.mean_[j] + sigma * rng.gaussian();
      if (d.theta_.distance_to(g) <= margin) ++inside;
    }
    d.mass_ = static_cast<double>(inside) / draws;
    if (!(d.mass_ > 0.0)) throw ConfigError("truncated_gaussian: support mass vanished");

    const double norm = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * dim) / d.mass_;
    const double near = std::max(0.0, d.theta_.distance_to(d.mean_) - margin);
    double far2 = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double side = std::max(std::abs(lo[j] - d.mean_[j]), std::abs(hi[j] - d.mean_[j]));
      far2 += side * side;
    }
    d.p_max_ = norm * std::exp(-0.5 * near * near / (sigma * sigma));
    d.p_min_ = norm * std::exp(-0.5 * far2 / (sigma * sigma));
    return d;
  }

  DesignFamily family() const { return family_; }
  int dim() const { return static_cast<int>(lower_.size()); }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  const Eigen::VectorXd& support_lower() const { return lower_; }
  const Eigen::VectorXd& support_upper() const { return upper_; }
  double gaussian_sigma() const { return sigma_; }
  const Eigen::VectorXd& gaussian_mean() const { return mean_; }

  void sample_into(Rng& rng, std::span<double> out) const {
    const int dim = this->dim();
    if (family_ == DesignFamily::UniformBox) {
      for (int j = 0; j < dim; ++j) {
        out[static_cast<std::size_t>(j)] = rng.uniform(lower_[j], upper_[j]);
      }
      return;
    }
    Eigen::VectorXd g(dim);
    for (;;) {
      for (int j = 0; j < dim; ++j) g[j] = mean_[j] + sigma_ * rng.gaussian();
      if (theta_.distance_to(g) <= margin_) break;
    }
    for (int j = 0; j < dim; ++j) out[static_cast<std::size_t>(j)] = g[j];
  }

  /// Density value (zero outside the support).
  double density(const Eigen::VectorXd& x) const {
    if (family_ == DesignFamily::UniformBox) {
      const bool inside = (x.array() >= lower_.array()).all() &&
                          (x.array() <= upper_.array()).all();
      return inside ? p_max_ : 0.0;
    }
    if (theta_.distance_to(x) > margin_) return 0.0;
    const int dim = this->dim();
    const double norm = std::pow(2.0 * std::numbers::pi * sigma_ * sigma_, -0.5 * dim) / mass_;
    return norm * std::exp(-0.5 * (x - mean_).squaredNorm() / (sigma_ * sigma_));
  }

 private:
  DesignDensity() : theta_(Domain::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1))) {}

  DesignFamily family_ = DesignFamily::UniformBox;
  Domain theta_;
  double margin_ = 1.0;
  Eigen::VectorXd lower_, upper_;
  Eigen::VectorXd mean_;
  double sigma_ = 1.0;
  double mass_ = 1.0;
  double p_min_ = 0.0;
  double p_max_ = 0.0;
};

enum class NoiseFamily { Gaussian, Laplace, None };

/// Zero-mean observation noise with sub-exponential tails.
class NoiseLaw {
 public:
  static NoiseLaw gaussian(double sigma) {
    if (!(sigma >= 0.0)) throw ConfigError("NoiseLaw::gaussian: sigma must be >= 0");
    NoiseLaw n;
    n.family_ = NoiseFamily::Gaussian;
    n.param_ = sigma;
    return n;
  }

  static NoiseLaw laplace(double scale) {
    if (!(scale >= 0.0)) throw ConfigError("NoiseLaw::laplace: scale must be >= 0");
    NoiseLaw n;
    n.family_ = NoiseFamily::Laplace;
    n.param_ = scale;
    return n;
  }

  static NoiseLaw none() { return NoiseLaw(); }

  NoiseFamily family() const { return family_; }
  double parameter() const { return param_; }

  double sample(Rng& rng) const {
    switch (family_) {
      case NoiseFamily::Gaussian: return param_ * rng.gaussian();
      case NoiseFamily::Laplace: return rng.laplace(param_);
      case NoiseFamily::None: return 0.0;
    }
    return 0.0;
  }

 private:
  NoiseFamily family_ = NoiseFamily::None;
  double param_ = 0.0;
};

/// A fully specified synthetic problem: objective with ground truth, design
/// density, noise law, constraint set, and the estimator tuning (beta,
/// alpha, kernel family).
struct Scenario {
  Objective objective;
  DesignDensity design;
  NoiseLaw noise;
  Domain domain;
  double beta = 2.0;
  double alpha = 1.0;
  KernelFamily kernel = KernelFamily::Quartic;
};

/// Draws n i.i.d. observations y_i = f(x_i) + xi_i. Deterministic given the
/// seed: per observation, the design point is drawn first, then the noise.
inline Dataset sample_scenario(const Scenario& scenario, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_scenario: n must be >= 1");
  const int dim = scenario.objective.dim();
  Dataset data(dim);
  data.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::int64_t i = 0; i < n; ++i) {
    scenario.design.sample_into(rng, x);
    const double y = scenario.objective(std::span<const double>(x)) + scenario.noise.sample(rng);
    data.append(x, y);
  }
  return data;
}

}  // namespace pasmin

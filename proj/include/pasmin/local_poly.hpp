#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "pasmin/errors.hpp"
#include "pasmin/kernel.hpp"
#include "pasmin/multi_index.hpp"
#include "pasmin/observations.hpp"

namespace pasmin {

/// Kernel-weighted moment matrix B and moment vector D of a local polynomial
/// fit at a center point, on the scale 1 / (normalization_count * h^d).
/// B is symmetric positive semidefinite; with ridge > 0 the regularized
/// system B + ridge*I is positive definite.
struct LocalPolyFit {
  Eigen::VectorXd center;
  double bandwidth = 0.0;
  double ridge = 0.0;
  Eigen::MatrixXd moment_matrix;  // B, S x S
  Eigen::VectorXd moment_vector;  // D, S
  std::int64_t n_used = 0;        // observations with nonzero kernel weight
  std::int64_t n_total = 0;       // observations offered
};

/// Coefficient vector of the (regularized) local polynomial fit, with the
/// fit geometry needed to read off derived quantities.
struct ThetaHat {
  Eigen::VectorXd coeffs;
  double bandwidth = 0.0;
  int dim = 0;
};

/// Accumulates B and D over the given observations around `center` with the
/// stated bandwidth. Observations outside the closed bandwidth ball are
/// skipped by a norm test before any feature evaluation; an empty
/// neighborhood yields zero B and D, which is a valid (degenerate) fit.
///
/// `normalization_count` is the count in the 1/(count * h^d) prefactor: the
/// round number k for the per-round fits, or half the total sample size for
/// the split-sample value estimator whose prefactor is 2/(n h^d).
template <ObservationRange R>
LocalPolyFit accumulate_fit(const R& obs, const Eigen::VectorXd& center,
                            double bandwidth, const Kernel& kernel,
                            const MultiIndexBasis& basis,
                            std::int64_t normalization_count,
                            double ridge = 0.0) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("accumulate_fit: bandwidth must be > 0");
  if (normalization_count < 1) {
    throw std::invalid_argument("accumulate_fit: normalization_count must be >= 1");
  }
  const int d = basis.dim();
  const int s = basis.size();

  LocalPolyFit fit;
  fit.center = center;
  fit.bandwidth = bandwidth;
  fit.ridge = ridge;
  fit.moment_matrix = Eigen::MatrixXd::Zero(s, s);
  fit.moment_vector = Eigen::VectorXd::Zero(s);
  fit.n_total = static_cast<std::int64_t>(obs.size());

  const double h2 = bandwidth * bandwidth;
  const double inv_h = 1.0 / bandwidth;
  std::vector<double> u(static_cast<std::size_t>(d));
  std::vector<double> feat(static_cast<std::size_t>(s));
  double* b = fit.moment_matrix.data();  // column-major, lower triangle filled
  double* dv = fit.moment_vector.data();

  const auto accumulate_point = [&](double w, double y) {
    ++fit.n_used;
    const double wy = w * y;
    for (int a = 0; a < s; ++a) {
      const double wa = w * feat[static_cast<std::size_t>(a)];
      double* col = b + static_cast<std::ptrdiff_t>(a) * s;
      for (int r = a; r < s; ++r) {
        col[r] += wa * feat[static_cast<std::size_t>(r)];
      }
      dv[a] += wy * feat[static_cast<std::size_t>(a)];
    }
  };

  const double* centre = center.data();
  const std::size_t n = obs.size();
  // the skip path reads only the coordinates; the response is fetched after
  // the norm test, so rejected points cost a single pass over x
  if (d == 1) {
    // dominant case of the per-round fits; the univariate feature vector is
    // the power sequence t^j / j!
    const double c0 = centre[0];
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = obs[i].x[0] - c0;
      const double r2 = diff * diff;
      if (r2 >= h2) continue;
      const double w = kernel.value_at_r2(r2 / h2);
      if (w <= 0.0) continue;
      const double t = diff * inv_h;
      double power = 1.0;
      feat[0] = 1.0;
      for (int j = 1; j < s; ++j) {
        power *= t;
        feat[static_cast<std::size_t>(j)] = power / basis.factorial(j);
      }
      accumulate_point(w, obs[i].y);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double r2 = 0.0;
      {
        const auto xi = obs[i].x;
        for (int c = 0; c < d; ++c) {
          const double diff = xi[static_cast<std::size_t>(c)] - centre[c];
          u[static_cast<std::size_t>(c)] = diff;
          r2 += diff * diff;
        }
      }
      if (r2 >= h2) continue;  // zero kernel weight on and outside the ball
      const double w = kernel.value_at_r2(r2 / h2);
      if (w <= 0.0) continue;
      for (int c = 0; c < d; ++c) u[static_cast<std::size_t>(c)] *= inv_h;
      basis.u_vector_into(u, feat);
      accumulate_point(w, obs[i].y);
    }
  }

  double scale = 1.0 / static_cast<double>(normalization_count);
  for (int c = 0; c < d; ++c) scale *= inv_h;
  fit.moment_matrix *= scale;
  fit.moment_vector *= scale;
  fit.moment_matrix.triangularView<Eigen::StrictlyUpper>() =
      fit.moment_matrix.transpose().triangularView<Eigen::StrictlyUpper>();
  return fit;
}

/// Solves (B + ridge*I) theta = D by Cholesky factorization with one step of
/// iterative refinement. With ridge > 0 the system is positive definite and
/// the solve cannot fail; with ridge = 0 a numerically singular B raises
/// SingularSystem so the caller can supply a ridge.
inline ThetaHat solve_regularized(const LocalPolyFit& fit) {
  Eigen::MatrixXd m = fit.moment_matrix;
  m.diagonal().array() += fit.ridge;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    if (fit.ridge > 0.0) {
      // Cannot happen for PSD B with a positive ridge barring non-finite
      // input; treat as a hard error either way.
      throw SingularSystem("solve_regularized: factorization failed with positive ridge");
    }
    throw SingularSystem("solve_regularized: moment matrix is singular and ridge = 0");
  }
  Eigen::VectorXd theta = llt.solve(fit.moment_vector);
  theta += llt.solve(fit.moment_vector - m * theta);
  if (fit.ridge == 0.0) {
    const double resid = (m * theta - fit.moment_vector).norm();
    if (!(resid <= 1e-8 * (fit.moment_vector.norm() + 1.0))) {
      throw SingularSystem("solve_regularized: unregularized solve did not converge");
    }
  }
  ThetaHat out;
  out.coeffs = std::move(theta);
  out.bandwidth = fit.bandwidth;
  out.dim = static_cast<int>(fit.center.size());
  return out;
}

/// Gradient estimate (1/h) * A * theta: the degree-1 coefficient block
/// scaled back to the original coordinates. Requires a basis of degree >= 1,
/// i.e. at least dim + 1 coefficients.
inline Eigen::VectorXd gradient_estimate(const ThetaHat& theta) {
  if (theta.coeffs.size() < theta.dim + 1) {
    throw std::logic_error("gradient_estimate: coefficient vector lacks a gradient block");
  }
  return theta.coeffs.segment(1, theta.dim) / theta.bandwidth;
}

/// Value estimate U(0)^T theta; the feature vector at zero is e_1, so this
/// is the leading coefficient.
inline double value_estimate(const ThetaHat& theta) { return theta.coeffs[0]; }

}  // namespace pasmin

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace pasmin {

/// Largest integer strictly smaller than `beta` (so 2.0 -> 1, 2.5 -> 2,
/// 3.0 -> 2). This is the polynomial degree matching smoothness `beta`.
/// Requires beta > 1 so the basis always contains the full gradient block.
inline int degree_from_beta(double beta) {
  if (!(beta > 1.0)) {
    throw std::invalid_argument("degree_from_beta: beta must exceed 1");
  }
  const double floored = std::floor(beta);
  const int ell = (floored == beta) ? static_cast<int>(floored) - 1
                                    : static_cast<int>(floored);
  return ell;
}

/// Ordered enumeration of all d-dimensional multi-indices m with |m| <= ell,
/// together with their factorials, and evaluation of the polynomial feature
/// vector whose j-th entry is u^{m(j)} / m(j)!.
///
/// The ordering is graded (by total degree) and, within each degree,
/// lexicographic with the first coordinate most significant. Consequently
/// entry 0 is the zero index and entries 1..d are the unit indices in
/// coordinate order. The ordering is deterministic and fixed.
class MultiIndexBasis {
 public:
  MultiIndexBasis(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1) throw std::invalid_argument("MultiIndexBasis: dim must be >= 1");
    if (degree < 0) throw std::invalid_argument("MultiIndexBasis: degree must be >= 0");
    std::vector<int> current(static_cast<std::size_t>(dim), 0);
    for (int total = 0; total <= degree; ++total) {
      emit_degree(current, 0, total);
    }
    factorials_.reserve(indices_.size());
    for (const auto& m : indices_) {
      double f = 1.0;
      for (int mj : m) {
        for (int v = 2; v <= mj; ++v) f *= v;
      }
      factorials_.push_back(f);
    }
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  /// Number of basis elements, binomial(dim + degree, dim).
  int size() const { return static_cast<int>(indices_.size()); }

  const std::vector<int>& index(int j) const { return indices_[static_cast<std::size_t>(j)]; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }
  double factorial(int j) const { return factorials_[static_cast<std::size_t>(j)]; }

  /// Fills out[j] = u^{m(j)} / m(j)! for all j, with the convention 0^0 = 1
  /// (so the feature vector at u = 0 is the first canonical basis vector).
  void u_vector_into(std::span<const double> u, std::span<double> out) const {
    const int s = size();
    for (int j = 0; j < s; ++j) {
      const std::vector<int>& m = indices_[static_cast<std::size_t>(j)];
      double value = 1.0;
      for (int c = 0; c < dim_; ++c) {
        const int e = m[static_cast<std::size_t>(c)];
        const double uc = u[static_cast<std::size_t>(c)];
        for (int rep = 0; rep < e; ++rep) value *= uc;
      }
      out[static_cast<std::size_t>(j)] = value / factorials_[static_cast<std::size_t>(j)];
    }
  }

  Eigen::VectorXd u_vector(std::span<const double> u) const {
    Eigen::VectorXd out(size());
    u_vector_into(u, {out.data(), static_cast<std::size_t>(out.size())});
    return out;
  }

  /// The d x S selector matrix with A[i][j] = 1 iff j = i + 1: applied to a
  /// feature vector it extracts the degree-1 block, which equals u itself
  /// because unit multi-indices have factorial 1. Requires degree >= 1.
  Eigen::MatrixXd selector_matrix() const {
    if (degree_ < 1) {
      throw std::logic_error("selector_matrix: basis has no degree-1 block");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim_, size());
    for (int i = 0; i < dim_; ++i) a(i, i + 1) = 1.0;
    return a;
  }

 private:
  // Enumerates all completions of current[0..coord) summing to `remaining`,
  // largest first so the intra-degree order is descending-lexicographic.
  void emit_degree(std::vector<int>& current, int coord, int remaining) {
    if (coord == dim_ - 1) {
      current[static_cast<std::size_t>(coord)] = remaining;
      indices_.push_back(current);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[static_cast<std::size_t>(coord)] = e;
      emit_degree(current, coord + 1, remaining - e);
    }
  }

  int dim_;
  int degree_;
  std::vector<std::vector<int>> indices_;
  std::vector<double> factorials_;
};

}  // namespace pasmin

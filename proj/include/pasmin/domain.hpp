#pragma once

#include <stdexcept>
#include <utility>

#include <Eigen/Core>

namespace pasmin {

/// Compact convex constraint set: an axis-aligned box or a Euclidean ball.
/// Supplies the exact Euclidean projection used by the projected descent.
class Domain {
 public:
  enum class Shape { Box, Ball };

  static Domain box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
    if (lower.size() != upper.size() || lower.size() == 0) {
      throw std::invalid_argument("Domain::box: bound dimensions disagree");
    }
    if ((lower.array() > upper.array()).any()) {
      throw std::invalid_argument("Domain::box: requires lower <= upper per coordinate");
    }
    Domain d;
    d.shape_ = Shape::Box;
    d.lower_ = std::move(lower);
    d.upper_ = std::move(upper);
    return d;
  }

  static Domain ball(Eigen::VectorXd center, double radius) {
    if (center.size() == 0) throw std::invalid_argument("Domain::ball: empty center");
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
    Domain d;
    d.shape_ = Shape::Ball;
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
  }

  Shape shape() const { return shape_; }
  int dim() const {
    return static_cast<int>(shape_ == Shape::Box ? lower_.size() : center_.size());
  }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }

  /// Euclidean projection: per-coordinate clamp for a box, radial rescale
  /// for a ball. The result is the unique nearest point of the set.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const {
    if (shape_ == Shape::Box) {
      return x.cwiseMax(lower_).cwiseMin(upper_);
    }
    const Eigen::VectorXd offset = x - center_;
    const double norm = offset.norm();
    if (norm <= radius_) return x;
    return center_ + (radius_ / norm) * offset;
  }

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    if (shape_ == Shape::Box) {
      return (x.array() >= lower_.array() - tol).all() &&
             (x.array() <= upper_.array() + tol).all();
    }
    return (x - center_).norm() <= radius_ + tol;
  }

  double distance_to(const Eigen::VectorXd& x) const { return (x - project(x)).norm(); }

  /// Box midpoint / ball center; the default start point of the optimizer.
  Eigen::VectorXd centroid() const {
    if (shape_ == Shape::Box) return 0.5 * (lower_ + upper_);
    return center_;
  }

  /// Axis-aligned bounding box of the set inflated by `margin`; covers the
  /// margin-neighbourhood on which design densities must be positive.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> inflated_bounds(double margin) const {
    if (shape_ == Shape::Box) {
      return {lower_.array() - margin, upper_.array() + margin};
    }
    return {center_.array() - (radius_ + margin), center_.array() + (radius_ + margin)};
  }

 private:
  Domain() = default;

  Shape shape_ = Shape::Box;
  Eigen::VectorXd lower_, upper_;   // box
  Eigen::VectorXd center_;          // ball
  double radius_ = 0.0;             // ball
};

}  // namespace pasmin

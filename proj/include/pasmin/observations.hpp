#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pasmin {

/// Lightweight view of one design point with its response.
struct ObservationRef {
  std::span<const double> x;
  double y = 0.0;
};

/// Any random-access sequence of (x, y) pairs. Algorithms are templated on
/// this so tests can substitute instrumented containers.
template <class R>
concept ObservationRange = requires(const R& r, std::size_t i) {
  { r.size() } -> std::convertible_to<std::size_t>;
  { r[i].y } -> std::convertible_to<double>;
  { r[i].x[0] } -> std::convertible_to<double>;
};

/// Owning, contiguous storage for observations; x coordinates row-major.
class Dataset {
 public:
  explicit Dataset(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("Dataset: dim must be >= 1");
  }

  int dim() const { return dim_; }
  std::size_t size() const { return y_.size(); }
  bool empty() const { return y_.empty(); }

  ObservationRef operator[](std::size_t i) const {
    return {std::span<const double>(x_.data() + i * static_cast<std::size_t>(dim_),
                                    static_cast<std::size_t>(dim_)),
            y_[i]};
  }

  void append(std::span<const double> x, double y) {
    if (x.size() != static_cast<std::size_t>(dim_)) {
      throw std::invalid_argument("Dataset::append: wrong point dimension");
    }
    x_.insert(x_.end(), x.begin(), x.end());
    y_.push_back(y);
  }

  void reserve(std::size_t n) {
    x_.reserve(n * static_cast<std::size_t>(dim_));
    y_.reserve(n);
  }

  double y(std::size_t i) const { return y_[i]; }
  double& y(std::size_t i) { return y_[i]; }
  std::span<const double> x(std::size_t i) const { return (*this)[i].x; }

 private:
  int dim_;
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Non-owning window [offset, offset + count) over an observation range.
template <ObservationRange R>
class SliceView {
 public:
  SliceView(const R& base, std::size_t offset, std::size_t count)
      : base_(&base), offset_(offset), count_(count) {}

  std::size_t size() const { return count_; }
  auto operator[](std::size_t i) const { return (*base_)[offset_ + i]; }

 private:
  const R* base_;
  std::size_t offset_;
  std::size_t count_;
};

template <ObservationRange R>
SliceView<R> slice(const R& base, std::size_t offset, std::size_t count) {
  return SliceView<R>(base, offset, count);
}

}  // namespace pasmin

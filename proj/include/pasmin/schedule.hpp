#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace pasmin {

struct ScheduleValues {
  double bandwidth = 0.0;  // h_k
  double ridge = 0.0;      // lambda_k
  double step_size = 0.0;  // eta_k
};

/// Per-round schedules of the projected descent:
///   h_k    = (log(k+1) / k)^{1/(2 beta + d)}
///   lambda = (log(k+1) / k)^{beta/(2 beta + d)}
///   eta_k  = 2 / (alpha k)
/// beta is the smoothness the estimator is tuned for, alpha the strong
/// convexity constant; both are user inputs.
class Schedule {
 public:
  Schedule(double beta, double alpha, int dim)
      : beta_(beta), alpha_(alpha), dim_(dim) {
    if (!(beta >= 2.0)) throw std::invalid_argument("Schedule: beta must be >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("Schedule: alpha must be > 0");
    if (dim < 1) throw std::invalid_argument("Schedule: dim must be >= 1");
  }

  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  int dim() const { return dim_; }

  double bandwidth_exponent() const { return 1.0 / (2.0 * beta_ + dim_); }
  double ridge_exponent() const { return beta_ / (2.0 * beta_ + dim_); }

  ScheduleValues at(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("Schedule::at: round index must be >= 1");
    const double ratio = std::log(static_cast<double>(k) + 1.0) / static_cast<double>(k);
    ScheduleValues v;
    v.bandwidth = std::pow(ratio, bandwidth_exponent());
    v.ridge = std::pow(ratio, ridge_exponent());
    v.step_size = 2.0 / (alpha_ * static_cast<double>(k));
    return v;
  }

 private:
  double beta_;
  double alpha_;
  int dim_;
};

/// Second-stage parameters of the split-sample value estimator, driven by
/// the full sample size n: h = n^{-1/(2 beta + d)}, lambda = n^{-beta/(2 beta + d)}.
struct StageTwoSchedule {
  double bandwidth = 0.0;
  double ridge = 0.0;

  static StageTwoSchedule for_total_samples(std::int64_t n, double beta, int dim) {
    if (n < 1) throw std::invalid_argument("StageTwoSchedule: n must be >= 1");
    if (!(beta >= 2.0)) throw std::invalid_argument("StageTwoSchedule: beta must be >= 2");
    if (dim < 1) throw std::invalid_argument("StageTwoSchedule: dim must be >= 1");
    const double nd = static_cast<double>(n);
    StageTwoSchedule s;
    s.bandwidth = std::pow(nd, -1.0 / (2.0 * beta + dim));
    s.ridge = std::pow(nd, -beta / (2.0 * beta + dim));
    return s;
  }
};

}  // namespace pasmin

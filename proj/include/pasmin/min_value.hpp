#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "pasmin/errors.hpp"
#include "pasmin/local_poly.hpp"
#include "pasmin/observations.hpp"
#include "pasmin/optimizer.hpp"
#include "pasmin/schedule.hpp"

namespace pasmin {

/// Even split of n observations into the locate half [0, m) and the evaluate
/// half [m, n). Odd n is an explicit error; the caller decides which point
/// to drop.
struct SplitPlan {
  std::int64_t total = 0;
  std::int64_t half = 0;

  static SplitPlan make(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("SplitPlan: need at least 2 observations");
    if (n % 2 != 0) {
      throw OddSampleSize("SplitPlan: sample size " + std::to_string(n) +
                          " is odd; drop a point explicitly");
    }
    return SplitPlan{n, n / 2};
  }
};

enum class Stage1Estimator { Average, Last };

struct MinValueOptions {
  Stage1Estimator stage1 = Stage1Estimator::Average;
};

struct MinValueResult {
  double value_estimate = 0.0;       // the minimum-value estimate
  Eigen::VectorXd stage1_center;     // where the second-stage fit is centered
  StageTwoSchedule stage2;
  SplitPlan split;
};

/// Second-stage pointwise estimator: regularized local polynomial value fit
/// at `query` over the evaluate half, with the 2/(n h^d) normalization
/// expressed through `half_count` = n/2.
template <ObservationRange R>
double pointwise_value_estimate(const R& second_half, const Eigen::VectorXd& query,
                                const StageTwoSchedule& stage2, std::int64_t half_count,
                                const Kernel& kernel, const MultiIndexBasis& basis) {
  const LocalPolyFit fit = accumulate_fit(second_half, query, stage2.bandwidth, kernel,
                                          basis, half_count, stage2.ridge);
  return value_estimate(solve_regularized(fit));
}

/// Two-stage minimum-value estimation: run the projected descent on the
/// first half of the data to locate the minimizer, then evaluate the
/// function there with a pointwise fit over the second half. The two halves
/// are never mixed; the value fit is independent of the located center.
template <ObservationRange R>
MinValueResult estimate_min_value(const R& observations, const Schedule& schedule,
                                  const Domain& domain, const Kernel& kernel,
                                  const MultiIndexBasis& basis, const Eigen::VectorXd& start,
                                  const MinValueOptions& options = {}) {
  const SplitPlan split = SplitPlan::make(static_cast<std::int64_t>(observations.size()));
  const std::size_t m = static_cast<std::size_t>(split.half);

  const OptimizerResult stage1 = run_optimizer(slice(observations, 0, m), schedule, domain,
                                               start, kernel, basis);
  MinValueResult result;
  result.split = split;
  result.stage1_center = options.stage1 == Stage1Estimator::Average
                             ? stage1.averaged_iterate
                             : stage1.final_iterate;
  result.stage2 = StageTwoSchedule::for_total_samples(split.total, schedule.beta(),
                                                      schedule.dim());
  result.value_estimate = pointwise_value_estimate(slice(observations, m, m),
                                                   result.stage1_center, result.stage2,
                                                   split.half, kernel, basis);
  return result;
}

}  // namespace pasmin

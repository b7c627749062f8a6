#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "pasmin/domain.hpp"
#include "pasmin/kernel.hpp"
#include "pasmin/local_poly.hpp"
#include "pasmin/multi_index.hpp"
#include "pasmin/observations.hpp"
#include "pasmin/schedule.hpp"

namespace pasmin {

struct OptimizerOptions {
  bool record_trajectory = false;
};

/// Running state of the projected descent. `iterate` is the point the next
/// round starts from; `iterate_sum` accumulates the iterates as recorded
/// before each update, so iterate_sum / round is their running average.
struct OptimizerState {
  std::int64_t round = 0;  // completed rounds
  Eigen::VectorXd iterate;
  Eigen::VectorXd iterate_sum;
  std::vector<Eigen::VectorXd> trajectory;
};

struct OptimizerResult {
  Eigen::VectorXd final_iterate;     // point after the last projected update
  Eigen::VectorXd averaged_iterate;  // mean of the n recorded iterates
  std::vector<Eigen::VectorXd> trajectory;
};

/// One round of the descent over the data prefix of length state.round + 1:
/// record the current iterate into the running sum, estimate the gradient by
/// the regularized local polynomial fit at the current iterate, and take a
/// projected step. An empty bandwidth neighborhood gives a zero gradient and
/// hence a null step.
template <ObservationRange R>
void optimizer_step(OptimizerState& state, const R& observation_prefix,
                    const Schedule& schedule, const Domain& domain,
                    const Kernel& kernel, const MultiIndexBasis& basis,
                    bool record_trajectory = false) {
  const std::int64_t k = state.round + 1;
  if (static_cast<std::int64_t>(observation_prefix.size()) != k) {
    throw std::invalid_argument("optimizer_step: prefix length must equal the round index");
  }
  state.iterate_sum += state.iterate;
  if (record_trajectory) state.trajectory.push_back(state.iterate);

  const ScheduleValues sv = schedule.at(k);
  const LocalPolyFit fit = accumulate_fit(observation_prefix, state.iterate, sv.bandwidth,
                                          kernel, basis, k, sv.ridge);
  const ThetaHat theta = solve_regularized(fit);
  const Eigen::VectorXd grad = gradient_estimate(theta);
  state.iterate = domain.project(state.iterate - sv.step_size * grad);
  state.round = k;
}

/// Full descent over all observations, one round per data point in order.
/// Returns the post-update final iterate and the average of the n recorded
/// iterates (the average includes the start point, which is recorded before
/// the first update).
///
/// Work: round k performs one norm test per prefix point (sum_k k = n^2/2
/// total) plus O(S^2) accumulation per point inside the shrinking bandwidth
/// ball; no spatial index is kept.
template <ObservationRange R>
OptimizerResult run_optimizer(const R& observations, const Schedule& schedule,
                              const Domain& domain, const Eigen::VectorXd& start,
                              const Kernel& kernel, const MultiIndexBasis& basis,
                              const OptimizerOptions& options = {}) {
  const std::int64_t n = static_cast<std::int64_t>(observations.size());
  if (n < 1) throw std::invalid_argument("run_optimizer: observations must be nonempty");
  if (!domain.contains(start, 1e-12)) {
    throw std::invalid_argument("run_optimizer: start point must lie in the domain");
  }
  if (basis.dim() != domain.dim() || basis.dim() != static_cast<int>(start.size())) {
    throw std::invalid_argument("run_optimizer: dimension mismatch");
  }

  OptimizerState state;
  state.iterate = start;
  state.iterate_sum = Eigen::VectorXd::Zero(start.size());
  if (options.record_trajectory) state.trajectory.reserve(static_cast<std::size_t>(n));

  for (std::int64_t k = 1; k <= n; ++k) {
    optimizer_step(state, slice(observations, 0, static_cast<std::size_t>(k)), schedule,
                   domain, kernel, basis, options.record_trajectory);
  }

  OptimizerResult result;
  result.final_iterate = state.iterate;
  result.averaged_iterate = state.iterate_sum / static_cast<double>(n);
  result.trajectory = std::move(state.trajectory);
  return result;
}

}  // namespace pasmin

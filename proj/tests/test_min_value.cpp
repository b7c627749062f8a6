#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/LU>

#include "pasmin/min_value.hpp"
#include "pasmin/testbed.hpp"

using pasmin::Dataset;
using pasmin::Domain;
using pasmin::Kernel;
using pasmin::KernelFamily;
using pasmin::MinValueOptions;
using pasmin::MinValueResult;
using pasmin::MultiIndexBasis;
using pasmin::Objective;
using pasmin::Scenario;
using pasmin::Schedule;
using pasmin::SplitPlan;
using pasmin::Stage1Estimator;

namespace {

Eigen::VectorXd vec1(double x) {
  Eigen::VectorXd v(1);
  v << x;
  return v;
}

Scenario scenario_with(Objective objective, double sigma) {
  const Domain domain = Domain::box(vec1(-1.0), vec1(1.0));
  return Scenario{std::move(objective),
                  pasmin::DesignDensity::uniform_box(domain),
                  sigma > 0.0 ? pasmin::NoiseLaw::gaussian(sigma) : pasmin::NoiseLaw::none(),
                  domain,
                  2.0,
                  2.0,
                  KernelFamily::Quartic};
}

/// Wraps a dataset and records the index of every element access.
class LoggingRange {
 public:
  LoggingRange(const Dataset& base, std::vector<std::size_t>& log)
      : base_(&base), log_(&log) {}
  std::size_t size() const { return base_->size(); }
  pasmin::ObservationRef operator[](std::size_t i) const {
    log_->push_back(i);
    return (*base_)[i];
  }

 private:
  const Dataset* base_;
  std::vector<std::size_t>* log_;
};

}  // namespace

TEST_CASE("odd sample sizes are an explicit error") {
  CHECK_THROWS_AS(SplitPlan::make(7), pasmin::OddSampleSize);
  CHECK_THROWS_AS(SplitPlan::make(1), std::invalid_argument);
  const SplitPlan plan = SplitPlan::make(10);
  CHECK(plan.total == 10);
  CHECK(plan.half == 5);

  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.1);
  const Dataset data = sample_scenario(sc, 11, 3);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  CHECK_THROWS_AS(
      estimate_min_value(data, schedule, sc.domain, kernel, basis, sc.domain.centroid()),
      pasmin::OddSampleSize);
}

TEST_CASE("minimal even sample produces a finite estimate") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.1);
  const Dataset data = sample_scenario(sc, 2, 4);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  const MinValueResult result =
      estimate_min_value(data, schedule, sc.domain, kernel, basis, sc.domain.centroid());
  CHECK(std::isfinite(result.value_estimate));
  CHECK(result.split.half == 1);
  CHECK(sc.domain.contains(result.stage1_center, 1e-12));
}

TEST_CASE("noiseless shifted quadratic: estimate approaches the true minimum") {
  // The ridge penalizes the constant coefficient, so a nonzero minimum value
  // is shrunk by roughly lambda / (p + lambda); at n = 8000 with beta = 2
  // that is about 0.1 of f* = 1. The error must sit near that prediction and
  // fall as n grows.
  const Scenario sc =
      scenario_with(Objective::shifted_quadratic(1, 2.0, vec1(0.0), 1.0), 0.0);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  auto error_at = [&](std::int64_t n) {
    const Dataset data = sample_scenario(sc, n, 5);
    const MinValueResult result =
        estimate_min_value(data, schedule, sc.domain, kernel, basis, sc.domain.centroid());
    return std::abs(result.value_estimate - 1.0);
  };
  const double coarse = error_at(500);
  const double fine = error_at(8000);
  CHECK(fine < coarse);
  const double lambda = pasmin::StageTwoSchedule::for_total_samples(8000, 2.0, 1).ridge;
  const double predicted_shrink = lambda / (0.25 + lambda);  // design density 1/4
  CHECK(fine == Catch::Approx(predicted_shrink).epsilon(0.25));
  CHECK(fine < 0.15);
}

TEST_CASE("larger samples improve the noiseless estimate in median") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.0);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  auto median_abs_error = [&](std::int64_t n) {
    std::vector<double> errors;
    for (int rep = 0; rep < 50; ++rep) {
      const Dataset data = sample_scenario(
          sc, n, pasmin::mix_seed({88, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(rep)}));
      const MinValueResult result =
          estimate_min_value(data, schedule, sc.domain, kernel, basis, sc.domain.centroid());
      errors.push_back(std::abs(result.value_estimate));
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    return errors[errors.size() / 2];
  };
  const double coarse = median_abs_error(500);
  const double fine = median_abs_error(4000);
  INFO("median |f_hat - f*| n=500: " << coarse << ", n=4000: " << fine);
  CHECK(fine < coarse);
}

TEST_CASE("stage separation: all first-half accesses precede all second-half accesses") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.2);
  const Dataset data = sample_scenario(sc, 400, 6);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);

  std::vector<std::size_t> log;
  const LoggingRange logged(data, log);
  const MinValueResult result =
      estimate_min_value(logged, schedule, sc.domain, kernel, basis, sc.domain.centroid());
  REQUIRE_FALSE(log.empty());

  const std::size_t m = static_cast<std::size_t>(result.split.half);
  bool in_second_stage = false;
  bool saw_first = false, saw_second = false;
  for (std::size_t index : log) {
    if (index >= m) {
      in_second_stage = true;
      saw_second = true;
    } else {
      saw_first = true;
      // a first-half access after any second-half access would mean the
      // stages leak into each other
      REQUIRE_FALSE(in_second_stage);
    }
  }
  CHECK(saw_first);
  CHECK(saw_second);
}

TEST_CASE("the two stages factor through their halves exactly") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.3);
  const Dataset data = sample_scenario(sc, 600, 7);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  const Eigen::VectorXd start = sc.domain.centroid();

  const MinValueResult combined =
      estimate_min_value(data, schedule, sc.domain, kernel, basis, start);

  // stage 1 recomputed from the first half alone
  const auto stage1 = run_optimizer(pasmin::slice(data, 0, 300), schedule, sc.domain, start,
                                    kernel, basis);
  CHECK(stage1.averaged_iterate == combined.stage1_center);

  // stage 2 recomputed from the second half alone at that center
  const double value = pointwise_value_estimate(pasmin::slice(data, 300, 300),
                                                combined.stage1_center, combined.stage2,
                                                300, kernel, basis);
  CHECK(value == combined.value_estimate);
}

TEST_CASE("stage-1 estimator switch") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.3);
  const Dataset data = sample_scenario(sc, 200, 8);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  const Eigen::VectorXd start = sc.domain.centroid();

  MinValueOptions avg, last;
  avg.stage1 = Stage1Estimator::Average;
  last.stage1 = Stage1Estimator::Last;
  const MinValueResult via_avg =
      estimate_min_value(data, schedule, sc.domain, kernel, basis, start, avg);
  const MinValueResult via_last =
      estimate_min_value(data, schedule, sc.domain, kernel, basis, start, last);

  const auto stage1 = run_optimizer(pasmin::slice(data, 0, 100), schedule, sc.domain, start,
                                    kernel, basis);
  CHECK(via_avg.stage1_center == stage1.averaged_iterate);
  CHECK(via_last.stage1_center == stage1.final_iterate);
}

TEST_CASE("value fit is exactly shift equivariant when unregularized") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.2);
  const Dataset data = sample_scenario(sc, 1000, 9);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const double shift = 3.75;
  Dataset shifted(1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    shifted.append(data[i].x, data[i].y + shift);
  }
  const Eigen::VectorXd center = vec1(0.2);
  const auto base = accumulate_fit(data, center, 0.4, kernel, basis, 1000);
  const auto moved = accumulate_fit(shifted, center, 0.4, kernel, basis, 1000);
  const double before = value_estimate(solve_regularized(base));
  const double after = value_estimate(solve_regularized(moved));
  CHECK(after - before == Catch::Approx(shift).margin(1e-10));
}

TEST_CASE("ridge shift deviation follows the closed-form factor") {
  // with ridge, a constant shift c moves the value estimate by
  // c (1 - ridge [(B + ridge I)^{-1}]_{00}), not by c itself
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.2);
  const Dataset data = sample_scenario(sc, 1000, 10);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const double shift = -2.0;
  Dataset shifted(1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    shifted.append(data[i].x, data[i].y + shift);
  }
  const Eigen::VectorXd center = vec1(-0.1);
  const double ridge = 0.05;
  const auto base = accumulate_fit(data, center, 0.4, kernel, basis, 1000, ridge);
  const auto moved = accumulate_fit(shifted, center, 0.4, kernel, basis, 1000, ridge);
  const double before = value_estimate(solve_regularized(base));
  const double after = value_estimate(solve_regularized(moved));

  Eigen::MatrixXd m = base.moment_matrix;
  m.diagonal().array() += ridge;
  const double factor = 1.0 - ridge * m.inverse()(0, 0);
  CHECK(after - before == Catch::Approx(shift * factor).margin(1e-10));
}

TEST_CASE("full two-stage estimate is shift equivariant up to the ridge factor") {
  const Scenario sc = scenario_with(Objective::quadratic(1, 2.0), 0.2);
  const Dataset data = sample_scenario(sc, 4000, 11);
  const Kernel kernel(sc.kernel, 1);
  const MultiIndexBasis basis(1, 1);
  const Schedule schedule(sc.beta, sc.alpha, 1);
  const double shift = 5.0;
  Dataset shifted(1);
  for (std::size_t i = 0; i < data.size(); ++i) {
    shifted.append(data[i].x, data[i].y + shift);
  }
  const MinValueResult before =
      estimate_min_value(data, schedule, sc.domain, kernel, basis, sc.domain.centroid());
  const MinValueResult after =
      estimate_min_value(shifted, schedule, sc.domain, kernel, basis, sc.domain.centroid());
  const double observed = after.value_estimate - before.value_estimate;
  INFO("shift response " << observed << " for shift " << shift);
  CHECK(std::abs(observed - shift) <= 0.2 * std::abs(shift));
}

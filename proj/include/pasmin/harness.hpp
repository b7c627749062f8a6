#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pasmin/errors.hpp"
#include "pasmin/min_value.hpp"
#include "pasmin/optimizer.hpp"
#include "pasmin/rng.hpp"
#include "pasmin/testbed.hpp"

namespace pasmin {

/// Risk functionals estimated by the Monte Carlo harness.
enum class RiskTarget {
  MinimizerL2,       ///< squared distance of the final iterate to the minimizer
  Optimization,      ///< objective gap of the averaged iterate
  OptimizationLast,  ///< objective gap of the final iterate (diagnostic)
  MinValueAbs,       ///< absolute error of the two-stage minimum-value estimate
  PointwiseValueSq,  ///< squared error of the second-half value fit at a fixed query
};

inline std::string to_string(RiskTarget t) {
  switch (t) {
    case RiskTarget::MinimizerL2: return "minimizer_l2";
    case RiskTarget::Optimization: return "optimization";
    case RiskTarget::OptimizationLast: return "optimization_last";
    case RiskTarget::MinValueAbs: return "minvalue_abs";
    case RiskTarget::PointwiseValueSq: return "pointwise_value_sq";
  }
  return "?";
}

inline RiskTarget risk_target_from_string(std::string_view name) {
  if (name == "minimizer_l2") return RiskTarget::MinimizerL2;
  if (name == "optimization") return RiskTarget::Optimization;
  if (name == "optimization_last") return RiskTarget::OptimizationLast;
  if (name == "minvalue_abs") return RiskTarget::MinValueAbs;
  if (name == "pointwise_value_sq") return RiskTarget::PointwiseValueSq;
  throw ConfigError("unknown risk target: " + std::string(name));
}

enum class RatePredictor { LogN, LogNOverLog };

inline std::string to_string(RatePredictor p) {
  return p == RatePredictor::LogN ? "log_n" : "log_n_over_log";
}

inline RatePredictor rate_predictor_from_string(std::string_view name) {
  if (name == "log_n") return RatePredictor::LogN;
  if (name == "log_n_over_log") return RatePredictor::LogNOverLog;
  throw ConfigError("unknown rate predictor: " + std::string(name));
}

/// Theoretical decay exponent (positive number e for risk ~ n^{-e}) of each
/// risk functional on the smooth strongly convex class.
inline double theoretical_exponent(RiskTarget target, double beta, int dim) {
  if (!(beta >= 2.0)) throw std::invalid_argument("theoretical_exponent: beta must be >= 2");
  if (dim < 1) throw std::invalid_argument("theoretical_exponent: dim must be >= 1");
  switch (target) {
    case RiskTarget::MinimizerL2:
    case RiskTarget::Optimization:
    case RiskTarget::OptimizationLast:
      return 2.0 * (beta - 1.0) / (2.0 * beta + dim);
    case RiskTarget::MinValueAbs:
      return beta > 2.0 ? beta / (2.0 * beta + dim) : 2.0 / (4.0 + dim);
    case RiskTarget::PointwiseValueSq:
      return 2.0 * beta / (2.0 * beta + dim);
  }
  return 0.0;
}

/// Default predictor per target: the minimizer/optimization bounds carry a
/// log factor, the minimum-value rate for beta > 2 is a clean power law.
inline RatePredictor default_predictor(RiskTarget target, double beta) {
  switch (target) {
    case RiskTarget::MinimizerL2:
    case RiskTarget::Optimization:
    case RiskTarget::OptimizationLast:
      return RatePredictor::LogNOverLog;
    case RiskTarget::MinValueAbs:
      return beta > 2.0 ? RatePredictor::LogN : RatePredictor::LogNOverLog;
    case RiskTarget::PointwiseValueSq:
      return RatePredictor::LogN;
  }
  return RatePredictor::LogN;
}

struct SlopeBand {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentPlan {
  Scenario scenario;
  std::vector<std::int64_t> n_grid;
  int replications = 2;
  std::uint64_t master_seed = 0;
  std::vector<RiskTarget> targets;
  std::optional<RatePredictor> predictor;  // overrides the per-target default
  Eigen::VectorXd query_point;             // PointwiseValueSq only
  double slope_tolerance = 0.15;           // default accept half-width around theory
  std::map<RiskTarget, SlopeBand> accept_bands;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (n_grid.empty()) throw ConfigError("plan: n_grid must be nonempty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      if (n_grid[i] < 1) throw ConfigError("plan: sample sizes must be positive");
      if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
        throw ConfigError("plan: n_grid must be strictly ascending");
      }
    }
    if (replications < 2) throw ConfigError("plan: need at least 2 replications");
    if (targets.empty()) throw ConfigError("plan: no risk targets requested");
    for (RiskTarget t : targets) {
      if (t == RiskTarget::MinValueAbs || t == RiskTarget::PointwiseValueSq) {
        for (std::int64_t n : n_grid) {
          if (n % 2 != 0) {
            throw ConfigError("plan: split-sample targets require even sample sizes");
          }
        }
      }
      if (t == RiskTarget::PointwiseValueSq &&
          query_point.size() != scenario.objective.dim()) {
        throw ConfigError("plan: pointwise target needs a query point of the data dimension");
      }
    }
  }
};

struct RiskCell {
  RiskTarget target = RiskTarget::MinimizerL2;
  std::int64_t n = 0;
  double mean_risk = 0.0;
  double std_error = 0.0;
  int replications = 0;
};

struct RateSummary {
  RiskTarget target = RiskTarget::MinimizerL2;
  RatePredictor predictor = RatePredictor::LogN;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double theoretical = 0.0;  // decay exponent, positive
  SlopeBand band;            // accepted slope range (negative numbers)
  bool pass = false;
  bool fitted = false;  // false when the grid is too short or the target aborted
};

struct TargetDiagnostic {
  RiskTarget target = RiskTarget::MinimizerL2;
  std::int64_t n = 0;
  int replication = 0;
  std::string message;
};

struct RiskReport {
  std::vector<RiskCell> cells;
  std::vector<RateSummary> rates;
  std::vector<TargetDiagnostic> diagnostics;
  std::vector<std::int64_t> n_grid;
  int replications = 0;
  std::uint64_t master_seed = 0;
};

struct RateFitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares of log(risk) on the chosen predictor of n.
/// Requires at least 3 points and strictly positive risks.
inline RateFitResult fit_rate(std::span<const std::pair<double, double>> points,
                              RatePredictor predictor) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_rate: need at least 3 grid points");
  }
  const std::size_t m = points.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double n = points[i].first;
    const double risk = points[i].second;
    if (!(risk > 0.0) || !std::isfinite(risk)) {
      throw NonPositiveRisk("fit_rate: risk must be positive at n = " +
                            std::to_string(static_cast<std::int64_t>(n)));
    }
    xs[i] = predictor == RatePredictor::LogN ? std::log(n) : std::log(n / std::log(n));
    ys[i] = std::log(risk);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  RateFitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ys[i] - fit.intercept - fit.slope * xs[i];
    rss += r * r;
  }
  fit.slope_stderr = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
  return fit;
}

namespace detail {

// Random streams per replication cell are grouped by the run they drive, so
// a target's risks are reproducible in isolation no matter which other
// targets the plan requests.
enum class StreamGroup : int { Descent = 0, MinValue = 1, Pointwise = 2 };

inline std::uint64_t cell_seed(std::uint64_t master, std::int64_t n, int replication,
                               StreamGroup group) {
  return mix_seed({master, static_cast<std::uint64_t>(n),
                   static_cast<std::uint64_t>(replication),
                   static_cast<std::uint64_t>(static_cast<int>(group)) + 0x51ULL});
}

struct DescentOut {
  double minimizer_sq = 0.0;
  double avg_gap = 0.0;
  double last_gap = 0.0;
};

template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& body) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, 64));
  if (workers == 1 || count <= 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Runs the full Monte Carlo experiment: for every (n, replication) cell,
/// sample a fresh dataset from a substream derived from (master_seed, n,
/// replication, run-group) and record the requested risks against the
/// scenario's exact ground truth. Replication cells execute in parallel;
/// aggregation order is fixed, so the report is deterministic regardless of
/// the number of workers. A non-finite risk aborts its target (with a
/// diagnostic record), not the experiment.
inline RiskReport run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const Scenario& sc = plan.scenario;
  const int dim = sc.objective.dim();
  const Kernel kernel(sc.kernel, dim);
  const MultiIndexBasis basis(dim, degree_from_beta(sc.beta));
  const Schedule schedule(sc.beta, sc.alpha, dim);
  const Eigen::VectorXd start = sc.domain.centroid();
  const Eigen::VectorXd x_star = sc.objective.minimizer();
  const double f_star = sc.objective.minimum();

  const bool want_descent =
      std::ranges::any_of(plan.targets, [](RiskTarget t) {
        return t == RiskTarget::MinimizerL2 || t == RiskTarget::Optimization ||
               t == RiskTarget::OptimizationLast;
      });
  const bool want_minvalue = std::ranges::any_of(
      plan.targets, [](RiskTarget t) { return t == RiskTarget::MinValueAbs; });
  const bool want_pointwise = std::ranges::any_of(
      plan.targets, [](RiskTarget t) { return t == RiskTarget::PointwiseValueSq; });

  const std::size_t grid_size = plan.n_grid.size();
  const int reps = plan.replications;
  std::vector<std::vector<detail::DescentOut>> descent(grid_size);
  std::vector<std::vector<double>> minvalue(grid_size), pointwise(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    if (want_descent) descent[g].resize(static_cast<std::size_t>(reps));
    if (want_minvalue) minvalue[g].resize(static_cast<std::size_t>(reps));
    if (want_pointwise) pointwise[g].resize(static_cast<std::size_t>(reps));
  }

  const std::int64_t cells = static_cast<std::int64_t>(grid_size) * reps;
  detail::parallel_for(cells, plan.threads, [&](std::int64_t job) {
    const std::size_t g = static_cast<std::size_t>(job) / static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(job % reps);
    const std::int64_t n = plan.n_grid[g];

    if (want_descent) {
      const std::uint64_t seed =
          detail::cell_seed(plan.master_seed, n, rep, detail::StreamGroup::Descent);
      const Dataset data = sample_scenario(sc, n, seed);
      const OptimizerResult run = run_optimizer(data, schedule, sc.domain, start, kernel, basis);
      detail::DescentOut& out = descent[g][static_cast<std::size_t>(rep)];
      out.minimizer_sq = (run.final_iterate - x_star).squaredNorm();
      out.avg_gap = sc.objective(run.averaged_iterate) - f_star;
      out.last_gap = sc.objective(run.final_iterate) - f_star;
    }
    if (want_minvalue) {
      const std::uint64_t seed =
          detail::cell_seed(plan.master_seed, n, rep, detail::StreamGroup::MinValue);
      const Dataset data = sample_scenario(sc, n, seed);
      const MinValueResult mv = estimate_min_value(data, schedule, sc.domain, kernel, basis, start);
      minvalue[g][static_cast<std::size_t>(rep)] = std::abs(mv.value_estimate - f_star);
    }
    if (want_pointwise) {
      const std::uint64_t seed =
          detail::cell_seed(plan.master_seed, n, rep, detail::StreamGroup::Pointwise);
      const Dataset data = sample_scenario(sc, n, seed);
      const SplitPlan split = SplitPlan::make(n);
      const StageTwoSchedule stage2 =
          StageTwoSchedule::for_total_samples(split.total, sc.beta, dim);
      const double fitted =
          pointwise_value_estimate(slice(data, static_cast<std::size_t>(split.half),
                                         static_cast<std::size_t>(split.half)),
                                   plan.query_point, stage2, split.half, kernel, basis);
      const double truth = sc.objective(plan.query_point);
      pointwise[g][static_cast<std::size_t>(rep)] =
          (fitted - truth) * (fitted - truth);
    }
  });

  RiskReport report;
  report.n_grid = plan.n_grid;
  report.replications = reps;
  report.master_seed = plan.master_seed;

  for (RiskTarget target : plan.targets) {
    bool aborted = false;
    std::vector<std::pair<double, double>> points;
    for (std::size_t g = 0; g < grid_size && !aborted; ++g) {
      double sum = 0.0, sumsq = 0.0;
      for (int rep = 0; rep < reps; ++rep) {
        double value = 0.0;
        switch (target) {
          case RiskTarget::MinimizerL2:
            value = descent[g][static_cast<std::size_t>(rep)].minimizer_sq;
            break;
          case RiskTarget::Optimization:
            value = descent[g][static_cast<std::size_t>(rep)].avg_gap;
            break;
          case RiskTarget::OptimizationLast:
            value = descent[g][static_cast<std::size_t>(rep)].last_gap;
            break;
          case RiskTarget::MinValueAbs:
            value = minvalue[g][static_cast<std::size_t>(rep)];
            break;
          case RiskTarget::PointwiseValueSq:
            value = pointwise[g][static_cast<std::size_t>(rep)];
            break;
        }
        if (!std::isfinite(value)) {
          report.diagnostics.push_back({target, plan.n_grid[g], rep,
                                        "non-finite risk; target aborted"});
          aborted = true;
          break;
        }
        sum += value;
        sumsq += value * value;
      }
      if (aborted) break;
      const double mean = sum / reps;
      const double var =
          std::max(0.0, (sumsq - sum * sum / reps) / static_cast<double>(reps - 1));
      RiskCell cell;
      cell.target = target;
      cell.n = plan.n_grid[g];
      cell.mean_risk = mean;
      cell.std_error = std::sqrt(var / reps);
      cell.replications = reps;
      report.cells.push_back(cell);
      points.emplace_back(static_cast<double>(plan.n_grid[g]), mean);
    }

    RateSummary rate;
    rate.target = target;
    rate.predictor = plan.predictor.value_or(default_predictor(target, sc.beta));
    rate.theoretical = theoretical_exponent(target, sc.beta, dim);
    if (auto it = plan.accept_bands.find(target); it != plan.accept_bands.end()) {
      rate.band = it->second;
    } else {
      rate.band = {-rate.theoretical - plan.slope_tolerance,
                   -rate.theoretical + plan.slope_tolerance};
    }
    if (!aborted && points.size() >= 3) {
      const RateFitResult fit = fit_rate(points, rate.predictor);
      rate.slope = fit.slope;
      rate.intercept = fit.intercept;
      rate.slope_stderr = fit.slope_stderr;
      rate.fitted = true;
      rate.pass = fit.slope >= rate.band.lo && fit.slope <= rate.band.hi;
    }
    report.rates.push_back(rate);
  }
  return report;
}

}  // namespace pasmin

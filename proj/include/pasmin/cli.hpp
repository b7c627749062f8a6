#pragma once

#include <cstdint>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pasmin/csv.hpp"
#include "pasmin/errors.hpp"
#include "pasmin/harness.hpp"
#include "pasmin/kernel_checks.hpp"
#include "pasmin/min_value.hpp"
#include "pasmin/serialize.hpp"

namespace pasmin {

namespace cli_detail {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitContractViolation = 3;

/// Parses "box:lo,hi" (same bounds in every coordinate) or "ball:r"
/// (centered at the origin).
inline Domain parse_domain_flag(const std::string& text, int dim) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--domain: expected box:lo,hi or ball:r");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "box") {
    const std::size_t comma = rest.find(',');
    if (comma == std::string::npos) throw ConfigError("--domain box: expected box:lo,hi");
    const double lo = std::stod(rest.substr(0, comma));
    const double hi = std::stod(rest.substr(comma + 1));
    return Domain::box(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
  }
  if (kind == "ball") {
    const double radius = std::stod(rest);
    return Domain::ball(Eigen::VectorXd::Zero(dim), radius);
  }
  throw ConfigError("--domain: unknown shape '" + kind + "'");
}

/// Tight per-coordinate bounding box of the data; the fallback domain when
/// none is given on the command line.
inline Domain data_bounding_box(const Dataset& data) {
  const int dim = data.dim();
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim, 1e300);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(dim, -1e300);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto ob = data[i];
    for (int j = 0; j < dim; ++j) {
      lo[j] = std::min(lo[j], ob.x[static_cast<std::size_t>(j)]);
      hi[j] = std::max(hi[j], ob.x[static_cast<std::size_t>(j)]);
    }
  }
  return Domain::box(lo, hi);
}

struct EstimateArgs {
  std::string input;
  std::string output;
  double beta = 2.0;
  double alpha = 1.0;
  std::string kernel = "quartic";
  std::string domain;
  std::string stage1 = "average";
  bool drop_last = false;
};

inline int cmd_estimate(const EstimateArgs& args, std::ostream& out, std::ostream& err) {
  Dataset data = read_observations_csv(args.input);
  if (data.size() < 2) throw CsvError(args.input + ": need at least 2 data rows");
  std::size_t n = data.size();
  if (n % 2 != 0) {
    if (!args.drop_last) {
      throw OddSampleSize(args.input + ": " + std::to_string(n) +
                          " rows is odd; pass --drop-last to discard the final row");
    }
    --n;
  }
  const int dim = data.dim();
  const Domain domain =
      args.domain.empty() ? data_bounding_box(data) : parse_domain_flag(args.domain, dim);
  if (domain.dim() != dim) throw ConfigError("--domain dimension does not match the data");
  const Kernel kernel(kernel_family_from_string(args.kernel), dim);
  const Schedule schedule(args.beta, args.alpha, dim);
  const MultiIndexBasis basis(dim, degree_from_beta(args.beta));
  MinValueOptions options;
  options.stage1 =
      args.stage1 == "last" ? Stage1Estimator::Last : Stage1Estimator::Average;

  const MinValueResult result = estimate_min_value(slice(data, 0, n), schedule, domain,
                                                   kernel, basis, domain.centroid(), options);

  json j;
  j["f_hat"] = result.value_estimate;
  j["z_bar_m"] = vector_to_json(result.stage1_center);
  j["n"] = result.split.total;
  j["m"] = result.split.half;
  j["params"] = {{"beta", args.beta},
                 {"alpha", args.alpha},
                 {"h_mn", result.stage2.bandwidth},
                 {"lambda_mn", result.stage2.ridge},
                 {"kernel", args.kernel}};
  const std::string text = to_canonical_string(j);
  if (args.output.empty()) {
    out << text;
    err << "estimate: f_hat = " << result.value_estimate << " at m = " << result.split.half
        << " of n = " << result.split.total << "\n";
  } else {
    write_text_file(args.output, text);
    out << "estimate: f_hat = " << result.value_estimate << " at m = " << result.split.half
        << " of n = " << result.split.total << " -> " << args.output << "\n";
  }
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::string output = "report.json";
  std::int64_t master_seed = -1;  // <0: keep the plan's seed
  std::string emit_data;
  int threads = -1;
};

inline std::string sibling_csv_path(const std::string& json_path) {
  const std::size_t dot = json_path.rfind('.');
  if (dot == std::string::npos || json_path.find('/', dot) != std::string::npos) {
    return json_path + ".csv";
  }
  return json_path.substr(0, dot) + ".csv";
}

inline int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream&) {
  ExperimentPlan plan = plan_from_json(read_json_file(args.config));
  if (args.master_seed >= 0) plan.master_seed = static_cast<std::uint64_t>(args.master_seed);
  if (args.threads >= 0) plan.threads = args.threads;
  plan.validate();

  if (!args.emit_data.empty()) {
    // one replication's raw observations: first grid size, replication 0,
    // the stream that drives the descent targets
    const std::uint64_t seed = detail::cell_seed(plan.master_seed, plan.n_grid.front(), 0,
                                                 detail::StreamGroup::Descent);
    write_observations_csv(args.emit_data,
                           sample_scenario(plan.scenario, plan.n_grid.front(), seed));
  }

  const RiskReport report = run_experiment(plan);
  write_text_file(args.output, to_canonical_string(report_to_json(report)));
  write_risk_csv(sibling_csv_path(args.output), report);

  for (const RateSummary& r : report.rates) {
    out << to_string(r.target) << ": ";
    if (r.fitted) {
      out << "slope " << r.slope << " (se " << r.slope_stderr << ") vs theory "
          << -r.theoretical << " [" << r.band.lo << ", " << r.band.hi << "] "
          << (r.pass ? "pass" : "FAIL") << "\n";
    } else {
      out << "slope not fitted (needs >= 3 grid points and finite risks)\n";
    }
  }
  for (const TargetDiagnostic& d : report.diagnostics) {
    out << to_string(d.target) << ": aborted at n = " << d.n << " rep " << d.replication
        << " (" << d.message << ")\n";
  }
  out << "report: " << args.output << " and " << sibling_csv_path(args.output) << "\n";
  return kExitOk;
}

struct RatesArgs {
  double beta = 2.0;
  int dim = 1;
};

inline int cmd_rates(const RatesArgs& args, std::ostream& out) {
  out << "risk decay exponents for beta = " << args.beta << ", d = " << args.dim << "\n";
  const RiskTarget targets[] = {RiskTarget::MinimizerL2, RiskTarget::Optimization,
                                RiskTarget::MinValueAbs, RiskTarget::PointwiseValueSq};
  for (RiskTarget t : targets) {
    out << "  " << to_string(t) << ": n^-" << theoretical_exponent(t, args.beta, args.dim)
        << "\n";
  }
  return kExitOk;
}

struct InspectArgs {
  double beta = 2.0;
  double alpha = 1.0;
  int dim = 1;
  std::string kernel = "quartic";
  std::vector<std::int64_t> rounds = {1, 10, 100, 1000, 10000};
};

inline int cmd_inspect(const InspectArgs& args, std::ostream& out) {
  const Schedule schedule(args.beta, args.alpha, args.dim);
  out << "schedules for beta = " << args.beta << ", alpha = " << args.alpha
      << ", d = " << args.dim << "\n";
  out << "  k  h_k  lambda_k  eta_k\n";
  for (std::int64_t k : args.rounds) {
    const ScheduleValues v = schedule.at(k);  // throws for k < 1
    out << "  " << k << "  " << v.bandwidth << "  " << v.ridge << "  " << v.step_size << "\n";
  }

  const Kernel kernel(kernel_family_from_string(args.kernel), args.dim);
  const double mass = kernel_mass_estimate(kernel);
  const double outside = max_value_outside_support(kernel);
  const double lipschitz = empirical_lipschitz(kernel);
  const bool mass_ok = std::abs(mass - 1.0) <= 0.01;
  const bool support_ok = outside == 0.0;
  const bool lipschitz_ok = lipschitz <= kernel.lipschitz_bound();
  out << "kernel " << args.kernel << " (d = " << args.dim << ")\n";
  out << "  mass " << mass << (mass_ok ? " pass" : " FAIL") << "\n";
  out << "  support leak " << outside << (support_ok ? " pass" : " FAIL") << "\n";
  out << "  lipschitz sample " << lipschitz << " bound " << kernel.lipschitz_bound()
      << (lipschitz_ok ? " pass" : " FAIL") << "\n";
  return mass_ok && support_ok && lipschitz_ok ? kExitOk : 1;
}

}  // namespace cli_detail

/// Entry point shared by the binary and the tests. Returns the process exit
/// status: 0 on success, 2 on input errors, 3 on contract violations such
/// as an odd sample size without --drop-last.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"passive-design estimation of the minimizer and minimum value "
               "of a smooth strongly convex regression function"};
  app.require_subcommand(1);

  cli_detail::EstimateArgs estimate;
  CLI::App* est = app.add_subcommand(
      "estimate", "two-stage minimum-value estimate on a CSV dataset");
  est->add_option("--input", estimate.input, "CSV with header x1,...,xd,y")->required();
  est->add_option("--output", estimate.output, "result JSON path (default: stdout)");
  est->add_option("--beta", estimate.beta, "smoothness the estimator is tuned for (>= 2)");
  est->add_option("--alpha", estimate.alpha, "strong convexity constant (> 0)");
  est->add_option("--kernel", estimate.kernel, "quartic|triweight|cone");
  est->add_option("--domain", estimate.domain, "box:lo,hi or ball:r (default: data bounding box)");
  est->add_option("--stage1", estimate.stage1, "average|last first-stage estimator");
  est->add_flag("--drop-last", estimate.drop_last, "drop the final row when n is odd");

  cli_detail::SimulateArgs simulate;
  CLI::App* sim = app.add_subcommand("simulate", "run a Monte Carlo experiment plan");
  sim->add_option("--config", simulate.config, "experiment plan JSON")->required();
  sim->add_option("--output", simulate.output, "report JSON path (a CSV is written alongside)");
  sim->add_option("--master-seed", simulate.master_seed, "override the plan's master seed");
  sim->add_option("--emit-data", simulate.emit_data,
                  "also dump one replication's raw observations to this CSV");
  sim->add_option("--threads", simulate.threads, "worker threads (0 = hardware)");

  cli_detail::RatesArgs rates;
  CLI::App* rat = app.add_subcommand("rates", "print theoretical risk decay exponents");
  rat->add_option("--beta", rates.beta, "smoothness (>= 2)");
  rat->add_option("--dim", rates.dim, "dimension");

  cli_detail::InspectArgs inspect;
  CLI::App* ins = app.add_subcommand("inspect", "print schedules and kernel diagnostics");
  ins->add_option("--beta", inspect.beta, "smoothness (>= 2)");
  ins->add_option("--alpha", inspect.alpha, "strong convexity constant");
  ins->add_option("--dim", inspect.dim, "dimension");
  ins->add_option("--kernel", inspect.kernel, "quartic|triweight|cone");
  ins->add_option("--k", inspect.rounds, "round indices for the schedule table");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return cli_detail::kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return cli_detail::kExitInputError;
  }

  try {
    if (est->parsed()) return cli_detail::cmd_estimate(estimate, out, err);
    if (sim->parsed()) return cli_detail::cmd_simulate(simulate, out, err);
    if (rat->parsed()) return cli_detail::cmd_rates(rates, out);
    if (ins->parsed()) return cli_detail::cmd_inspect(inspect, out);
  } catch (const OddSampleSize& e) {
    err << "error: " << e.what() << "\n";
    return cli_detail::kExitContractViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return cli_detail::kExitInputError;
  }
  return cli_detail::kExitInputError;
}

}  // namespace pasmin

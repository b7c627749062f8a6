#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pasmin/errors.hpp"
#include "pasmin/harness.hpp"
#include "pasmin/testbed.hpp"

namespace pasmin {

using json = nlohmann::json;

inline Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("expected a numeric array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
  json j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

inline Domain domain_from_json(const json& j) {
  const std::string shape = j.at("shape").get<std::string>();
  if (shape == "box") {
    return Domain::box(vector_from_json(j.at("lower")), vector_from_json(j.at("upper")));
  }
  if (shape == "ball") {
    return Domain::ball(vector_from_json(j.at("center")), j.at("radius").get<double>());
  }
  throw ConfigError("domain: unknown shape '" + shape + "'");
}

inline json domain_to_json(const Domain& d) {
  json j;
  if (d.shape() == Domain::Shape::Box) {
    j["shape"] = "box";
    j["lower"] = vector_to_json(d.lower());
    j["upper"] = vector_to_json(d.upper());
  } else {
    j["shape"] = "ball";
    j["center"] = vector_to_json(d.center());
    j["radius"] = d.radius();
  }
  return j;
}

inline Objective objective_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  Objective out = [&]() {
    if (family == "quadratic") {
      return Objective::quadratic(j.at("dim").get<int>(), j.at("alpha").get<double>(),
                                  j.value("delta", 0.0));
    }
    if (family == "shifted_quadratic") {
      return Objective::shifted_quadratic(j.at("dim").get<int>(), j.at("alpha").get<double>(),
                                          vector_from_json(j.at("center")),
                                          j.value("offset", 0.0), j.value("delta", 0.0));
    }
    if (family == "quadratic_plus_bump") {
      return Objective::quadratic_plus_bump(j.at("dim").get<int>(), j.at("alpha").get<double>(),
                                            j.value("delta", 0.1), j.value("r", 0.1),
                                            j.at("beta").get<double>(),
                                            j.at("n").get<std::int64_t>());
    }
    if (family == "cosine_perturbed_quadratic") {
      Eigen::VectorXd center;
      if (j.contains("center")) center = vector_from_json(j.at("center"));
      return Objective::cosine_perturbed_quadratic(
          j.at("dim").get<int>(), j.at("quad").get<double>(), j.at("eps").get<double>(),
          j.at("omega").get<double>(), center, j.value("offset", 0.0));
    }
    throw ConfigError("objective: unknown family '" + family + "'");
  }();
  if (j.contains("claim_beta")) out.claim_beta(j.at("claim_beta").get<double>());
  return out;
}

inline DesignDensity design_from_json(const json& j, const Domain& domain) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "uniform_box") return DesignDensity::uniform_box(domain);
  if (family == "truncated_gaussian") {
    return DesignDensity::truncated_gaussian(domain, vector_from_json(j.at("mean")),
                                             j.at("sigma").get<double>());
  }
  throw ConfigError("design: unknown family '" + family + "'");
}

inline NoiseLaw noise_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "gaussian") return NoiseLaw::gaussian(j.at("sigma").get<double>());
  if (family == "laplace") return NoiseLaw::laplace(j.at("scale").get<double>());
  if (family == "none") return NoiseLaw::none();
  throw ConfigError("noise: unknown family '" + family + "'");
}

inline Scenario scenario_from_json(const json& j) {
  Domain domain = domain_from_json(j.at("domain"));
  Scenario sc{
      objective_from_json(j.at("objective")),
      design_from_json(j.at("design"), domain),
      noise_from_json(j.at("noise")),
      domain,
      j.at("beta").get<double>(),
      j.at("alpha").get<double>(),
      kernel_family_from_string(j.value("kernel", "quartic")),
  };
  if (sc.objective.dim() != domain.dim()) {
    throw ConfigError("scenario: objective and domain dimensions disagree");
  }
  return sc;
}

inline ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan plan{scenario_from_json(j.at("scenario"))};
  for (const auto& n : j.at("n_grid")) plan.n_grid.push_back(n.get<std::int64_t>());
  plan.replications = j.at("replications").get<int>();
  plan.master_seed = j.value("master_seed", std::uint64_t{0});
  for (const auto& t : j.at("targets")) {
    plan.targets.push_back(risk_target_from_string(t.get<std::string>()));
  }
  if (j.contains("predictor")) {
    plan.predictor = rate_predictor_from_string(j.at("predictor").get<std::string>());
  }
  if (j.contains("query_point")) plan.query_point = vector_from_json(j.at("query_point"));
  plan.slope_tolerance = j.value("slope_tolerance", 0.15);
  if (j.contains("accept_bands")) {
    for (const auto& [key, band] : j.at("accept_bands").items()) {
      plan.accept_bands[risk_target_from_string(key)] =
          SlopeBand{band.at(0).get<double>(), band.at(1).get<double>()};
    }
  }
  plan.threads = j.value("threads", 0);
  return plan;
}

inline json report_to_json(const RiskReport& report) {
  json j;
  j["master_seed"] = report.master_seed;
  j["replications"] = report.replications;
  j["n_grid"] = report.n_grid;
  j["cells"] = json::array();
  for (const RiskCell& c : report.cells) {
    j["cells"].push_back({{"target", to_string(c.target)},
                          {"n", c.n},
                          {"mean_risk", c.mean_risk},
                          {"std_error", c.std_error},
                          {"replications", c.replications}});
  }
  j["rates"] = json::array();
  for (const RateSummary& r : report.rates) {
    j["rates"].push_back({{"target", to_string(r.target)},
                          {"predictor", to_string(r.predictor)},
                          {"slope", r.slope},
                          {"intercept", r.intercept},
                          {"slope_stderr", r.slope_stderr},
                          {"theoretical_exponent", r.theoretical},
                          {"band_lo", r.band.lo},
                          {"band_hi", r.band.hi},
                          {"pass", r.pass},
                          {"fitted", r.fitted}});
  }
  j["diagnostics"] = json::array();
  for (const TargetDiagnostic& d : report.diagnostics) {
    j["diagnostics"].push_back({{"target", to_string(d.target)},
                                {"n", d.n},
                                {"replication", d.replication},
                                {"message", d.message}});
  }
  return j;
}

inline RiskReport report_from_json(const json& j) {
  RiskReport report;
  report.master_seed = j.at("master_seed").get<std::uint64_t>();
  report.replications = j.at("replications").get<int>();
  for (const auto& n : j.at("n_grid")) report.n_grid.push_back(n.get<std::int64_t>());
  for (const auto& c : j.at("cells")) {
    report.cells.push_back({risk_target_from_string(c.at("target").get<std::string>()),
                            c.at("n").get<std::int64_t>(), c.at("mean_risk").get<double>(),
                            c.at("std_error").get<double>(), c.at("replications").get<int>()});
  }
  for (const auto& r : j.at("rates")) {
    RateSummary rate;
    rate.target = risk_target_from_string(r.at("target").get<std::string>());
    rate.predictor = rate_predictor_from_string(r.at("predictor").get<std::string>());
    rate.slope = r.at("slope").get<double>();
    rate.intercept = r.at("intercept").get<double>();
    rate.slope_stderr = r.at("slope_stderr").get<double>();
    rate.theoretical = r.at("theoretical_exponent").get<double>();
    rate.band = {r.at("band_lo").get<double>(), r.at("band_hi").get<double>()};
    rate.pass = r.at("pass").get<bool>();
    rate.fitted = r.at("fitted").get<bool>();
    report.rates.push_back(rate);
  }
  for (const auto& d : j.at("diagnostics")) {
    report.diagnostics.push_back({risk_target_from_string(d.at("target").get<std::string>()),
                                  d.at("n").get<std::int64_t>(), d.at("replication").get<int>(),
                                  d.at("message").get<std::string>()});
  }
  return report;
}

/// Canonical serialization: sorted keys (the container is ordered by key)
/// and shortest round-trip float formatting, so reading a document and
/// re-serializing it reproduces the bytes.
inline std::string to_canonical_string(const json& j) { return j.dump(2) + "\n"; }

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

}  // namespace pasmin

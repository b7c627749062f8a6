#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "pasmin/serialize.hpp"

using pasmin::json;

namespace {

const char* kPlanText = R"({
  "master_seed": 11,
  "n_grid": [100, 200, 400],
  "replications": 3,
  "targets": ["minimizer_l2", "minvalue_abs"],
  "predictor": "log_n_over_log",
  "query_point": [0.3],
  "slope_tolerance": 0.2,
  "accept_bands": {"minimizer_l2": [-0.55, -0.25]},
  "scenario": {
    "beta": 2.0,
    "alpha": 2.0,
    "kernel": "quartic",
    "domain": {"shape": "box", "lower": [-1.0], "upper": [1.0]},
    "design": {"family": "uniform_box"},
    "noise": {"family": "gaussian", "sigma": 0.3},
    "objective": {"family": "quadratic", "dim": 1, "alpha": 2.0}
  }
})";

}  // namespace

TEST_CASE("plans parse with every override in place") {
  const pasmin::ExperimentPlan plan = pasmin::plan_from_json(json::parse(kPlanText));
  plan.validate();
  CHECK(plan.master_seed == 11);
  CHECK(plan.n_grid == std::vector<std::int64_t>{100, 200, 400});
  CHECK(plan.replications == 3);
  REQUIRE(plan.targets.size() == 2);
  CHECK(plan.targets[0] == pasmin::RiskTarget::MinimizerL2);
  CHECK(plan.targets[1] == pasmin::RiskTarget::MinValueAbs);
  REQUIRE(plan.predictor.has_value());
  CHECK(*plan.predictor == pasmin::RatePredictor::LogNOverLog);
  CHECK(plan.query_point[0] == 0.3);
  CHECK(plan.slope_tolerance == 0.2);
  REQUIRE(plan.accept_bands.count(pasmin::RiskTarget::MinimizerL2) == 1);
  CHECK(plan.scenario.objective.strong_convexity() == 2.0);
  CHECK(plan.scenario.domain.dim() == 1);
  CHECK(plan.scenario.noise.family() == pasmin::NoiseFamily::Gaussian);
}

TEST_CASE("every objective family builds from its JSON recipe") {
  const json quad = {{"family", "quadratic"}, {"dim", 2}, {"alpha", 1.5}, {"delta", 0.1}};
  CHECK(pasmin::objective_from_json(quad).strong_convexity() == Catch::Approx(1.65));

  const json shifted = {{"family", "shifted_quadratic"}, {"dim", 1},    {"alpha", 1.0},
                        {"center", {0.25}},              {"offset", 2.0}};
  const pasmin::Objective sq = pasmin::objective_from_json(shifted);
  CHECK(sq.minimum() == 2.0);
  CHECK(sq.minimizer()[0] == 0.25);

  const json bump = {{"family", "quadratic_plus_bump"}, {"dim", 1}, {"alpha", 2.0},
                     {"delta", 0.1},                    {"r", 0.1}, {"beta", 2.0},
                     {"n", 1000}};
  CHECK(pasmin::objective_from_json(bump).family() ==
        pasmin::ObjectiveFamily::QuadraticPlusBump);

  const json cosine = {{"family", "cosine_perturbed_quadratic"},
                       {"dim", 1},
                       {"quad", 2.5},
                       {"eps", -0.5},
                       {"omega", 1.0},
                       {"claim_beta", 3.0}};
  const pasmin::Objective cq = pasmin::objective_from_json(cosine);
  CHECK(cq.strong_convexity() == Catch::Approx(2.0));
  CHECK(cq.beta_claimed() == 3.0);

  const json unknown = {{"family", "cubic"}};
  CHECK_THROWS_AS(pasmin::objective_from_json(unknown), pasmin::ConfigError);
}

TEST_CASE("dimension mismatches in scenarios are rejected") {
  json plan = json::parse(kPlanText);
  plan["scenario"]["objective"]["dim"] = 2;
  CHECK_THROWS_AS(pasmin::plan_from_json(plan), pasmin::ConfigError);
}

TEST_CASE("reports round-trip to byte-identical JSON") {
  pasmin::ExperimentPlan plan = pasmin::plan_from_json(json::parse(kPlanText));
  plan.n_grid = {100, 200, 400};
  const pasmin::RiskReport report = pasmin::run_experiment(plan);

  const std::string first = pasmin::to_canonical_string(pasmin::report_to_json(report));
  const pasmin::RiskReport reloaded = pasmin::report_from_json(json::parse(first));
  const std::string second = pasmin::to_canonical_string(pasmin::report_to_json(reloaded));
  CHECK(first == second);

  // parse -> dump alone is canonical as well
  CHECK(pasmin::to_canonical_string(json::parse(first)) == first);
}

TEST_CASE("domain JSON round-trips both shapes") {
  const json box = {{"shape", "box"}, {"lower", {-1.0, 0.0}}, {"upper", {1.0, 2.0}}};
  const pasmin::Domain d = pasmin::domain_from_json(box);
  CHECK(pasmin::domain_to_json(d) == box);

  const json ball = {{"shape", "ball"}, {"center", {0.0}}, {"radius", 1.5}};
  CHECK(pasmin::domain_to_json(pasmin::domain_from_json(ball)) == ball);

  const json bad = {{"shape", "simplex"}};
  CHECK_THROWS_AS(pasmin::domain_from_json(bad), pasmin::ConfigError);
}

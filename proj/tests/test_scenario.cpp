// Copyright 2026 The distlqr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>

#include "dlqr/errors.hpp"
#include "dlqr/scenario.hpp"

using namespace dlqr;
using nlohmann::json;

namespace {

json minimal_config() {
  return json::parse(R"({
    "system": {"A": [[0.5]], "B": [[1.0]]},
    "cost": {"Q": [[1.0]], "R": [[1.0]], "gamma": 0.8},
    "policy": {"K": "riccati"},
    "noise": {"kind": "gaussian", "mean": [0.0], "cov": [[1.0]]},
    "evaluation": {"mode": "modelbased", "x0": [1.0], "N": 10, "M": 100, "seed": 7}
  })");
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("minimal config parses with defaults") {
  const ScenarioConfig cfg = parse_scenario(minimal_config());
  CHECK(cfg.gamma == 0.8);
  CHECK(cfg.riccati_policy);
  CHECK(cfg.N == 10);
  CHECK(cfg.M == 100);
  CHECK(cfg.T == 100);       // default
  CHECK(cfg.delta == 0.05);  // default
  CHECK(cfg.seed == 7);
  CHECK(cfg.out_dir == "out");
}

TEST_CASE("the default seed is the documented constant") {
  json j = minimal_config();
  j["evaluation"].erase("seed");
  CHECK(parse_scenario(j).seed == 0xD15712B0ULL);
}

TEST_CASE("round trip preserves the configuration exactly") {
  json j = minimal_config();
  j["system"]["C"] = {{1.0, 0.0}};
  j["system"]["A"] = {{0.5, 0.1}, {0.0, 0.4}};
  j["system"]["B"] = {{1.0}, {0.5}};
  j["cost"]["Q"] = {{1.0, 0.0}, {0.0, 2.0}};
  j["cost"]["R"] = {{1.0}};
  j["policy"]["K"] = {{-0.3, -0.1}};
  j["policy"]["L"] = {{0.2}, {0.1}};
  j["noise"] = {{"kind", "gaussian_mixture"},
                {"weights", {0.25, 0.75}},
                {"means", {{-1.0, 0.0}, {1.0, 0.0}}},
                {"covs", {{{1.0, 0.0}, {0.0, 1.0}}, {{0.5, 0.1}, {0.1, 0.5}}}}};
  j["observation_noise"] = {{"kind", "uniform_box"}, {"lo", {-0.5}}, {"hi", {0.5}}};
  j["perturbation"] = {{"epsilon_A", 0.1}, {"epsilon_B", 0.2}};
  j["evaluation"]["x0"] = {1.0, -1.0};
  j["evaluation"]["xhat0"] = {0.0, 0.0};
  j["output"] = {{"directory", "artifacts"}, {"formats", {"csv"}}};

  const ScenarioConfig cfg = parse_scenario(j);
  const ScenarioConfig again = parse_scenario(to_json(cfg));
  CHECK(cfg == again);
  CHECK(to_json(cfg) == to_json(again));
}

TEST_CASE("round trip with relative and absolute perturbations") {
  json j = minimal_config();
  j["perturbation"] = {{"dA", {{0.01}}}, {"dB", {{0.0}}}};
  const ScenarioConfig cfg = parse_scenario(j);
  REQUIRE(cfg.perturbation.has_value());
  REQUIRE(cfg.perturbation->dA.has_value());
  CHECK(parse_scenario(to_json(cfg)) == cfg);
}

TEST_CASE("errors carry the offending field path") {
  json j = minimal_config();
  j["system"].erase("A");
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("system.A"), ConfigError);

  j = minimal_config();
  j["cost"]["gamma"] = 1.5;
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("gamma"), ConfigError);

  j = minimal_config();
  j["evaluation"]["mode"] = "exact";
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("mode"), ConfigError);

  j = minimal_config();
  j["noise"]["kind"] = "cauchy";
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("noise.kind"), ConfigError);

  j = minimal_config();
  j["system"]["A"] = {{1.0, 2.0}, {3.0}};
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("system.A"), ConfigError);

  j = minimal_config();
  j["policy"]["K"] = "optimal";
  CHECK_THROWS_WITH_AS(parse_scenario(j), doctest::Contains("policy.K"), ConfigError);
}

TEST_CASE("policy gain resolves through the riccati solver") {
  const ScenarioConfig cfg = parse_scenario(minimal_config());
  const Eigen::MatrixXd K = cfg.policy_gain();
  // scalar: K = -g a b P / (r + g b^2 P), P from 0.8-discounted equation
  const RiccatiSolution sol = solve_discounted_riccati(cfg.problem());
  CHECK(K(0, 0) == sol.K(0, 0));
}

TEST_CASE("builtin plant matrices and disturbances") {
  const DiscountedLQRProblem dc = datacenter_problem(0.6);
  CHECK(dc.A(0, 0) == 1.01);
  CHECK(dc.A(0, 1) == 0.01);
  CHECK(dc.A(0, 2) == 0.0);
  CHECK(dc.A(2, 2) == 1.01);
  CHECK((dc.B - Eigen::MatrixXd::Identity(3, 3)).norm() == 0.0);
  CHECK(spectral_radius(dc.A) > 1.0);  // open loop is unstable

  for (const NoiseModel& m :
       {scalar_normal_noise(), scalar_uniform_noise(), scalar_bimodal_noise()}) {
    const MomentBounds mb = m.moment_bounds();
    CHECK(mb.zero_mean);
    CHECK(mb.sigma2 == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Eigen::MatrixXd L = datacenter_observer_gain();
  CHECK(L(2, 1) == 2.32);
  const Eigen::MatrixXd C = datacenter_observation_matrix();
  CHECK(C.rows() == 2);
  CHECK(spectral_radius(datacenter_problem(0.6).A - L * C) ==
        doctest::Approx(0.9).epsilon(1e-9));
}

TEST_SUITE_END();

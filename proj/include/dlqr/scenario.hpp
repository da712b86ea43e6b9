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

#ifndef DLQR_SCENARIO_HPP_
#define DLQR_SCENARIO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlqr/lqg.hpp"
#include "dlqr/noise.hpp"
#include "dlqr/system.hpp"

namespace dlqr {

// Serializable description of a disturbance; builds the immutable NoiseModel.
struct NoiseSpec {
  std::string kind;  // "gaussian" | "uniform_box" | "gaussian_mixture"
  // gaussian
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  // uniform_box
  Eigen::VectorXd lo, hi;
  // gaussian_mixture
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> means;
  std::vector<Eigen::MatrixXd> covs;

  NoiseModel build() const;
  bool operator==(const NoiseSpec&) const = default;
};

struct PerturbationSpec {
  std::optional<double> eps_A, eps_B;  // relative: dA = eps_A * A, dB = eps_B * B
  std::optional<Eigen::MatrixXd> dA, dB;
  bool operator==(const PerturbationSpec&) const = default;
};

enum class EvalMode { kModelBased, kModelFree, kLqg };

// The default master seed echoed in every report when none is configured.
inline constexpr std::uint64_t kDefaultSeed = 0xD15712B0ULL;

// A full scenario: system, costs, policy, noise, evaluation settings and
// output destinations. Mirrors the JSON config document one-to-one.
struct ScenarioConfig {
  // system block
  Eigen::MatrixXd A, B;
  std::optional<Eigen::MatrixXd> C;
  // cost block
  Eigen::MatrixXd Q, R;
  double gamma = 0.0;
  // policy block: either an explicit gain or "riccati"; the observer gain is
  // either an explicit matrix or "kalman"
  bool riccati_policy = true;
  std::optional<Eigen::MatrixXd> K;
  bool kalman_observer = false;
  std::optional<Eigen::MatrixXd> L;
  // noise block(s)
  NoiseSpec noise;
  std::optional<NoiseSpec> obs_noise;
  std::optional<PerturbationSpec> perturbation;
  // evaluation block
  EvalMode mode = EvalMode::kModelBased;
  int N = 30;
  int T = 100;
  std::size_t M = 30000;
  Eigen::VectorXd x0;
  std::optional<Eigen::VectorXd> xhat0;
  std::uint64_t seed = kDefaultSeed;
  double delta = 0.05;
  double target = 0.01;
  // output block
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};

  bool operator==(const ScenarioConfig&) const = default;

  DiscountedLQRProblem problem() const;
  // The configured gain: explicit K, or the Riccati-optimal one.
  Eigen::MatrixXd policy_gain() const;
  PartiallyObservableProblem observable_problem() const;
};

// Parsing throws ConfigError with the offending field path in the message.
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);
nlohmann::json to_json(const ScenarioConfig& cfg);

// json <-> Eigen helpers (row-major nested arrays)
nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& field);
Eigen::VectorXd vector_from_json(const nlohmann::json& j, const std::string& field);

// Built-in instances used by the `tables` and `figures` subcommands and the
// test suites.

// Three-node heat-coupled plant with identity actuation, Q = R = I.
DiscountedLQRProblem datacenter_problem(double gamma);

// Scalar x+ = x + u + v with q = r = 1.
DiscountedLQRProblem scalar_integrator_problem(double gamma);

// The three unit-variance scalar disturbances compared on the integrator:
// standard normal, uniform on [-sqrt(3), sqrt(3)], and a symmetric two-mode
// Gaussian mixture at +/-0.99.
NoiseModel scalar_normal_noise();
NoiseModel scalar_uniform_noise();
NoiseModel scalar_bimodal_noise();

// Output-feedback variant of the plant: two observed nodes and a fixed
// observer gain.
Eigen::MatrixXd datacenter_observation_matrix();  // 2 x 3
Eigen::MatrixXd datacenter_observer_gain();       // 3 x 2
PartiallyObservableProblem datacenter_observer_problem(double gamma);

}  // namespace dlqr

#endif  // DLQR_SCENARIO_HPP_

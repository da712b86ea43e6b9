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

#include "dlqr/scenario.hpp"

#include <cmath>
#include <fstream>

#include "dlqr/errors.hpp"

namespace dlqr {

using nlohmann::json;

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ConfigError(field + ": expected a matrix as an array of row arrays");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ConfigError(field + ": row " + std::to_string(r) + " has inconsistent length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        throw ConfigError(field + "[" + std::to_string(r) + "][" + std::to_string(c) +
                          "]: expected a number");
      }
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(field + ": expected a nonempty numeric array");
  }
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError(field + "[" + std::to_string(i) + "]: expected a number");
    }
    v(i) = j[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

namespace {

const json& require_field(const json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(path + "." + key + ": missing required field");
  }
  return *it;
}

double require_number(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

NoiseSpec parse_noise(const json& j, const std::string& path) {
  NoiseSpec spec;
  const json& kind = require_field(j, "kind", path);
  if (!kind.is_string()) throw ConfigError(path + ".kind: expected a string");
  spec.kind = kind.get<std::string>();
  if (spec.kind == "gaussian") {
    spec.mean = vector_from_json(require_field(j, "mean", path), path + ".mean");
    spec.cov = matrix_from_json(require_field(j, "cov", path), path + ".cov");
  } else if (spec.kind == "uniform_box") {
    spec.lo = vector_from_json(require_field(j, "lo", path), path + ".lo");
    spec.hi = vector_from_json(require_field(j, "hi", path), path + ".hi");
  } else if (spec.kind == "gaussian_mixture") {
    const json& w = require_field(j, "weights", path);
    const json& mns = require_field(j, "means", path);
    const json& cvs = require_field(j, "covs", path);
    if (!w.is_array() || !mns.is_array() || !cvs.is_array() || w.size() != mns.size() ||
        w.size() != cvs.size()) {
      throw ConfigError(path + ": weights, means and covs must be arrays of equal length");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      spec.weights.push_back(w[i].get<double>());
      spec.means.push_back(vector_from_json(mns[i], path + ".means[" + std::to_string(i) + "]"));
      spec.covs.push_back(matrix_from_json(cvs[i], path + ".covs[" + std::to_string(i) + "]"));
    }
  } else {
    throw ConfigError(path + ".kind: unknown noise kind '" + spec.kind +
                      "' (expected gaussian, uniform_box or gaussian_mixture)");
  }
  return spec;
}

json noise_to_json(const NoiseSpec& spec) {
  json j;
  j["kind"] = spec.kind;
  if (spec.kind == "gaussian") {
    j["mean"] = vector_to_json(spec.mean);
    j["cov"] = matrix_to_json(spec.cov);
  } else if (spec.kind == "uniform_box") {
    j["lo"] = vector_to_json(spec.lo);
    j["hi"] = vector_to_json(spec.hi);
  } else {
    j["weights"] = spec.weights;
    j["means"] = json::array();
    j["covs"] = json::array();
    for (const auto& m : spec.means) j["means"].push_back(vector_to_json(m));
    for (const auto& c : spec.covs) j["covs"].push_back(matrix_to_json(c));
  }
  return j;
}

}  // namespace

NoiseModel NoiseSpec::build() const {
  if (kind == "gaussian") return NoiseModel::gaussian(mean, cov);
  if (kind == "uniform_box") return NoiseModel::uniform_box(lo, hi);
  if (kind == "gaussian_mixture") return NoiseModel::gaussian_mixture(weights, means, covs);
  throw ConfigError("noise.kind: unknown noise kind '" + kind + "'");
}

ScenarioConfig parse_scenario(const json& j) {
  ScenarioConfig cfg;
  const json& system = require_field(j, "system", "config");
  cfg.A = matrix_from_json(require_field(system, "A", "system"), "system.A");
  cfg.B = matrix_from_json(require_field(system, "B", "system"), "system.B");
  if (system.contains("C")) {
    cfg.C = matrix_from_json(system["C"], "system.C");
  }

  const json& cost = require_field(j, "cost", "config");
  cfg.Q = matrix_from_json(require_field(cost, "Q", "cost"), "cost.Q");
  cfg.R = matrix_from_json(require_field(cost, "R", "cost"), "cost.R");
  cfg.gamma = require_number(cost, "gamma", "cost");
  if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) {
    throw ConfigError("cost.gamma: must lie strictly inside (0, 1)");
  }

  const json& policy = require_field(j, "policy", "config");
  const json& kfield = require_field(policy, "K", "policy");
  if (kfield.is_string()) {
    if (kfield.get<std::string>() != "riccati") {
      throw ConfigError("policy.K: expected a matrix or the string \"riccati\"");
    }
    cfg.riccati_policy = true;
  } else {
    cfg.riccati_policy = false;
    cfg.K = matrix_from_json(kfield, "policy.K");
  }
  if (policy.contains("L")) {
    if (policy["L"].is_string()) {
      if (policy["L"].get<std::string>() != "kalman") {
        throw ConfigError("policy.L: expected a matrix or the string \"kalman\"");
      }
      cfg.kalman_observer = true;
    } else {
      cfg.L = matrix_from_json(policy["L"], "policy.L");
    }
  }

  cfg.noise = parse_noise(require_field(j, "noise", "config"), "noise");
  if (j.contains("observation_noise")) {
    cfg.obs_noise = parse_noise(j["observation_noise"], "observation_noise");
  }
  if (j.contains("perturbation")) {
    const json& p = j["perturbation"];
    PerturbationSpec ps;
    if (p.contains("epsilon_A") || p.contains("epsilon_B")) {
      ps.eps_A = require_number(p, "epsilon_A", "perturbation");
      ps.eps_B = require_number(p, "epsilon_B", "perturbation");
    } else if (p.contains("dA") || p.contains("dB")) {
      ps.dA = matrix_from_json(require_field(p, "dA", "perturbation"), "perturbation.dA");
      ps.dB = matrix_from_json(require_field(p, "dB", "perturbation"), "perturbation.dB");
    } else {
      throw ConfigError("perturbation: expected epsilon_A/epsilon_B or dA/dB");
    }
    cfg.perturbation = std::move(ps);
  }

  const json& ev = require_field(j, "evaluation", "config");
  const std::string mode = require_field(ev, "mode", "evaluation").get<std::string>();
  if (mode == "modelbased") {
    cfg.mode = EvalMode::kModelBased;
  } else if (mode == "modelfree") {
    cfg.mode = EvalMode::kModelFree;
  } else if (mode == "lqg") {
    cfg.mode = EvalMode::kLqg;
  } else {
    throw ConfigError("evaluation.mode: expected modelbased, modelfree or lqg");
  }
  cfg.x0 = vector_from_json(require_field(ev, "x0", "evaluation"), "evaluation.x0");
  if (ev.contains("xhat0")) cfg.xhat0 = vector_from_json(ev["xhat0"], "evaluation.xhat0");
  if (ev.contains("N")) {
    cfg.N = ev["N"].get<int>();
    if (cfg.N < 0) throw ConfigError("evaluation.N: must be nonnegative");
  }
  if (ev.contains("T")) {
    cfg.T = ev["T"].get<int>();
    if (cfg.T < 1) throw ConfigError("evaluation.T: must be at least 1");
  }
  if (ev.contains("M")) {
    const long long m = ev["M"].get<long long>();
    if (m < 1) throw ConfigError("evaluation.M: must be at least 1");
    cfg.M = static_cast<std::size_t>(m);
  }
  if (ev.contains("seed")) cfg.seed = ev["seed"].get<std::uint64_t>();
  if (ev.contains("delta")) {
    cfg.delta = ev["delta"].get<double>();
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
      throw ConfigError("evaluation.delta: must lie in (0, 1)");
    }
  }
  if (ev.contains("target")) {
    cfg.target = ev["target"].get<double>();
    if (!(cfg.target > 0.0)) throw ConfigError("evaluation.target: must be positive");
  }

  if (j.contains("output")) {
    const json& out = j["output"];
    if (out.contains("directory")) cfg.out_dir = out["directory"].get<std::string>();
    if (out.contains("formats")) {
      cfg.formats.clear();
      for (const auto& f : out["formats"]) cfg.formats.push_back(f.get<std::string>());
    }
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return parse_scenario(j);
}

json to_json(const ScenarioConfig& cfg) {
  json j;
  j["system"]["A"] = matrix_to_json(cfg.A);
  j["system"]["B"] = matrix_to_json(cfg.B);
  if (cfg.C) j["system"]["C"] = matrix_to_json(*cfg.C);
  j["cost"]["Q"] = matrix_to_json(cfg.Q);
  j["cost"]["R"] = matrix_to_json(cfg.R);
  j["cost"]["gamma"] = cfg.gamma;
  if (cfg.riccati_policy) {
    j["policy"]["K"] = "riccati";
  } else {
    j["policy"]["K"] = matrix_to_json(*cfg.K);
  }
  if (cfg.kalman_observer) {
    j["policy"]["L"] = "kalman";
  } else if (cfg.L) {
    j["policy"]["L"] = matrix_to_json(*cfg.L);
  }
  j["noise"] = noise_to_json(cfg.noise);
  if (cfg.obs_noise) j["observation_noise"] = noise_to_json(*cfg.obs_noise);
  if (cfg.perturbation) {
    json p;
    if (cfg.perturbation->eps_A) {
      p["epsilon_A"] = *cfg.perturbation->eps_A;
      p["epsilon_B"] = *cfg.perturbation->eps_B;
    } else {
      p["dA"] = matrix_to_json(*cfg.perturbation->dA);
      p["dB"] = matrix_to_json(*cfg.perturbation->dB);
    }
    j["perturbation"] = std::move(p);
  }
  switch (cfg.mode) {
    case EvalMode::kModelBased: j["evaluation"]["mode"] = "modelbased"; break;
    case EvalMode::kModelFree: j["evaluation"]["mode"] = "modelfree"; break;
    case EvalMode::kLqg: j["evaluation"]["mode"] = "lqg"; break;
  }
  j["evaluation"]["x0"] = vector_to_json(cfg.x0);
  if (cfg.xhat0) j["evaluation"]["xhat0"] = vector_to_json(*cfg.xhat0);
  j["evaluation"]["N"] = cfg.N;
  j["evaluation"]["T"] = cfg.T;
  j["evaluation"]["M"] = cfg.M;
  j["evaluation"]["seed"] = cfg.seed;
  j["evaluation"]["delta"] = cfg.delta;
  j["evaluation"]["target"] = cfg.target;
  j["output"]["directory"] = cfg.out_dir;
  j["output"]["formats"] = cfg.formats;
  return j;
}

DiscountedLQRProblem ScenarioConfig::problem() const {
  DiscountedLQRProblem p{A, B, Q, R, gamma};
  p.validate();
  return p;
}

Eigen::MatrixXd ScenarioConfig::policy_gain() const {
  if (!riccati_policy) return *K;
  return solve_discounted_riccati(problem()).K;
}

PartiallyObservableProblem ScenarioConfig::observable_problem() const {
  if (!C) throw ConfigError("system.C: required for lqg mode");
  if (!obs_noise) throw ConfigError("observation_noise: required for lqg mode");
  PartiallyObservableProblem p{A, B, *C, Q, R, gamma, noise.build(), obs_noise->build()};
  p.validate();
  return p;
}

DiscountedLQRProblem datacenter_problem(double gamma) {
  Eigen::MatrixXd A(3, 3);
  A << 1.01, 0.01, 0.0,
       0.01, 1.01, 0.01,
       0.0,  0.01, 1.01;
  DiscountedLQRProblem p{A, Eigen::MatrixXd::Identity(3, 3),
                         Eigen::MatrixXd::Identity(3, 3),
                         Eigen::MatrixXd::Identity(3, 3), gamma};
  return p;
}

DiscountedLQRProblem scalar_integrator_problem(double gamma) {
  Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  return DiscountedLQRProblem{one, one, one, one, gamma};
}

NoiseModel scalar_normal_noise() { return NoiseModel::standard_normal(1); }

NoiseModel scalar_uniform_noise() {
  const double r = std::sqrt(3.0);
  return NoiseModel::uniform_box(Eigen::VectorXd::Constant(1, -r),
                                 Eigen::VectorXd::Constant(1, r));
}

NoiseModel scalar_bimodal_noise() {
  // two symmetric modes at +/-0.99 with component variance 1 - 0.99^2,
  // so the total variance is exactly 1
  const double mu = 0.99;
  const double var = 1.0 - mu * mu;
  return NoiseModel::gaussian_mixture(
      {0.5, 0.5},
      {Eigen::VectorXd::Constant(1, -mu), Eigen::VectorXd::Constant(1, mu)},
      {Eigen::MatrixXd::Constant(1, 1, var), Eigen::MatrixXd::Constant(1, 1, var)});
}

Eigen::MatrixXd datacenter_observation_matrix() {
  Eigen::MatrixXd C(2, 3);
  C << 1, 0, 0,
       0, 1, 0;
  return C;
}

Eigen::MatrixXd datacenter_observer_gain() {
  Eigen::MatrixXd L(3, 2);
  L << 0.21, 0.01,
       0.01, 0.32,
       0.0,  2.32;
  return L;
}

PartiallyObservableProblem datacenter_observer_problem(double gamma) {
  const DiscountedLQRProblem base = datacenter_problem(gamma);
  return PartiallyObservableProblem{base.A,
                                    base.B,
                                    datacenter_observation_matrix(),
                                    base.Q,
                                    base.R,
                                    gamma,
                                    NoiseModel::standard_normal(3),
                                    NoiseModel::standard_normal(2)};
}

}  // namespace dlqr

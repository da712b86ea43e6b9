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

#include "dlqr/model_free.hpp"

#include <cmath>
#include <string>

#include "dlqr/errors.hpp"
#include "dlqr/parallel.hpp"

namespace dlqr {

namespace {
constexpr double kStateNormLimit = 1e12;
}

double rollout_cost(const DiscountedLQRProblem& prob, const Eigen::MatrixXd& K,
                    const Eigen::VectorXd& x0, int T, const NoiseModel& noise,
                    Rng& rng, std::size_t trajectory_index) {
  if (K.rows() != prob.p() || K.cols() != prob.n() || x0.size() != prob.n() ||
      noise.dim() != prob.n()) {
    throw DimensionMismatch("rollout: policy, state or noise dimension disagrees");
  }
  if (T < 1) throw ConfigError("rollout horizon T must be at least 1");
  const Eigen::MatrixXd Q_K = prob.Q + K.transpose() * prob.R * K;
  Eigen::VectorXd x = x0;
  double cost = 0.0;
  double discount = 1.0;
  for (int t = 0;; ++t) {
    cost += discount * x.dot(Q_K * x);
    if (t == T) break;
    const Eigen::VectorXd u = K * x;
    x = prob.A * x + prob.B * u + noise.sample(rng);
    if (x.norm() > kStateNormLimit) {
      throw TrajectoryOverflow("state norm exceeded 1e12 at step " + std::to_string(t + 1) +
                                   "; the closed loop is diverging",
                               trajectory_index);
    }
    discount *= prob.gamma;
  }
  return cost;
}

EmpiricalDistribution evaluate_model_free(const DiscountedLQRProblem& prob,
                                          const Eigen::MatrixXd& K,
                                          const NoiseModel& noise,
                                          const RolloutConfig& cfg,
                                          unsigned threads) {
  prob.validate();
  if (cfg.M == 0) throw TooFewSamples("trajectory count M must be positive");
  std::vector<double> costs(cfg.M);
  parallel_for(cfg.M, threads, [&](std::size_t m) {
    Rng rng = Rng::substream(cfg.master_seed, m);
    costs[m] = rollout_cost(prob, K, cfg.x0, cfg.T, noise, rng, m);
  });
  SeedInfo info{cfg.master_seed,
                "rollout(T=" + std::to_string(cfg.T) + ",M=" + std::to_string(cfg.M) +
                    "," + noise.describe() + ")"};
  return EmpiricalDistribution(std::move(costs), std::move(info));
}

ModelFreeBoundReport model_free_bound(const ClosedLoopModel& closed_loop,
                                      const Eigen::VectorXd& x0, double gamma,
                                      double sigma2, double f_max, int T,
                                      std::size_t M, double delta,
                                      bool use_alternate_tail_constant) {
  const double rho = closed_loop.rho_K;
  if (rho >= 1.0) {
    throw NormTooLarge("model-free bound needs ||A_K|| < 1 (spectral norm)");
  }
  if (gamma * rho * rho >= 1.0) {
    throw NormTooLarge("model-free bound needs gamma * ||A_K||^2 < 1");
  }
  const double sigma = std::sqrt(sigma2);
  ModelFreeBoundReport r;
  r.delta = delta;
  r.dkw_term = dkw_epsilon(M, delta);
  r.c1 = x0.squaredNorm() / (1.0 - gamma * rho * rho);
  r.c2 = 2.0 * x0.norm() * sigma / ((1.0 - rho) * (1.0 - gamma * rho));
  r.c3 = use_alternate_tail_constant
             ? sigma2 / ((1.0 - gamma) * (1.0 - rho * rho))
             : sigma2 / ((1.0 - gamma) * (1.0 - gamma * rho));
  const double norm_qk = spectral_norm(closed_loop.Q_K);
  const double decay = std::pow(gamma, T + 1);
  const double rho_t = std::pow(rho, T + 1);
  r.truncation_term = f_max * norm_qk * decay * (r.c1 * rho_t * rho_t + r.c2 * rho_t + r.c3);
  r.total = r.dkw_term + r.truncation_term;
  return r;
}

SampleSizePlan plan_sample_size(double target_total, double delta,
                                double truncation_term) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("delta must lie in (0, 1)");
  }
  if (target_total <= truncation_term) {
    throw TargetTooSmall("requested accuracy is below the truncation error at this horizon");
  }
  SampleSizePlan p;
  p.truncation_term = truncation_term;
  const double budget = target_total - truncation_term;
  const double m_real = std::log(1.0 / delta) / (2.0 * budget * budget);
  p.M_raw = static_cast<long long>(std::ceil(m_real - 1e-9));
  if (p.M_raw < 1) p.M_raw = 1;
  p.M_rounded = ((p.M_raw + 500) / 1000) * 1000;
  return p;
}

}  // namespace dlqr

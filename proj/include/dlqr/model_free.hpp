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

#ifndef DLQR_MODEL_FREE_HPP_
#define DLQR_MODEL_FREE_HPP_

#include <cstdint>

#include "dlqr/empirical.hpp"
#include "dlqr/noise.hpp"
#include "dlqr/system.hpp"

namespace dlqr {

struct RolloutConfig {
  int T = 100;                 // horizon: cost is accumulated for t = 0..T
  std::size_t M = 1;           // number of independent trajectories
  Eigen::VectorXd x0;
  std::uint64_t master_seed = 0;
};

// One trajectory cost sum_{t=0}^{T} gamma^t x_t'(Q + K'RK)x_t under
// x_{t+1} = A x_t + B u_t + v_t, u_t = K x_t. The system matrices are used
// only inside this simulator; estimation consumes trajectories alone.
// Throws TrajectoryOverflow once a state norm exceeds 1e12.
double rollout_cost(const DiscountedLQRProblem& prob, const Eigen::MatrixXd& K,
                    const Eigen::VectorXd& x0, int T, const NoiseModel& noise,
                    Rng& rng, std::size_t trajectory_index = 0);

// M rollout costs sorted into an empirical distribution; trajectory m uses
// substream(master_seed, m), so the output is identical for any thread count.
EmpiricalDistribution evaluate_model_free(const DiscountedLQRProblem& prob,
                                          const Eigen::MatrixXd& K,
                                          const NoiseModel& noise,
                                          const RolloutConfig& cfg,
                                          unsigned threads = 1);

// High-probability sup-CDF error of the EDF built from M length-T rollouts:
// total = sqrt(ln(1/delta) / (2M))
//       + f_max ||Q_K|| gamma^{T+1} (c1 rho^{2(T+1)} + c2 rho^{T+1} + c3).
struct ModelFreeBoundReport {
  double dkw_term = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double truncation_term = 0.0;
  double total = 0.0;
  double delta = 0.0;
};

// `use_alternate_tail_constant` switches c3 from sigma^2/((1-gamma)(1-gamma rho))
// to sigma^2/((1-gamma)(1-rho^2)); both are valid envelopes for the discarded
// tail and the first is the default.
ModelFreeBoundReport model_free_bound(const ClosedLoopModel& closed_loop,
                                      const Eigen::VectorXd& x0, double gamma,
                                      double sigma2, double f_max, int T,
                                      std::size_t M, double delta,
                                      bool use_alternate_tail_constant = false);

struct SampleSizePlan {
  long long M_raw = 0;      // ceil(ln(1/delta) / (2 (target - truncation)^2))
  long long M_rounded = 0;  // M_raw rounded to the nearest 1000
  double truncation_term = 0.0;
};

// Inverts the DKW term for the trajectory count needed to push the total
// error below target_total given the truncation term at the chosen horizon.
// Throws TargetTooSmall when target_total <= truncation_term.
SampleSizePlan plan_sample_size(double target_total, double delta,
                                double truncation_term = 0.0);

}  // namespace dlqr

#endif  // DLQR_MODEL_FREE_HPP_

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

#ifndef DLQR_MODEL_BASED_HPP_
#define DLQR_MODEL_BASED_HPP_

#include <cstdint>

#include "dlqr/empirical.hpp"
#include "dlqr/noise.hpp"
#include "dlqr/system.hpp"

namespace dlqr {

// Everything needed to draw one truncated exact return: the closed loop, the
// disturbance law, the initial state, and the number N of retained noise
// terms.
struct TruncatedReturnSpec {
  ClosedLoopModel closed_loop;
  NoiseModel noise;
  Eigen::VectorXd x0;
  double gamma = 0.0;
  int N = 0;

  void validate() const;
};

// One draw of the truncated exact return
//
//   x'Px + sum_{k=0}^{N-1} gamma^{k+1} (2 w_k'P a_k + w_k'P w_k + 2 w_k'P s_k)
//
// with a_k = A_K^{k+1} x and s_k = sum_{tau<k} A_K^{k-tau} w_tau, computed by
// the O(N n^2) recursions a_{k+1} = A_K a_k and s_{k+1} = A_K (s_k + w_k).
double sample_truncated_return(const TruncatedReturnSpec& spec, Rng& rng);

// M independent draws using substream(master_seed, m) for draw m; the result
// is identical for any thread count.
EmpiricalDistribution sample_return_distribution(const TruncatedReturnSpec& spec,
                                                 std::size_t M,
                                                 std::uint64_t master_seed,
                                                 unsigned threads = 1);

// Exact mean of the (untruncated) return for a zero-mean disturbance:
// x'Px + gamma/(1-gamma) * Tr(P * Sigma_w) with Sigma_w = E[w w'].
// Throws NonZeroMean otherwise.
double analytic_mean(const ClosedLoopModel& closed_loop, const Eigen::VectorXd& x0,
                     double gamma, const NoiseModel& noise);

// Truncation error bound: sup-CDF distance between the exact and N-term
// return laws is at most c0 * gamma^N.
struct TruncationBoundReport {
  double c0 = 0.0;
  double f_max_used = 0.0;
  double bound_at_N = 0.0;  // c0 * gamma^N
  int N = 0;
  int N_required = 0;       // smallest N with c0 * gamma^N <= target
  double target = 0.0;
  struct Components {
    double quadratic_noise = 0.0;  // lambda_max(P) sigma^2 gamma / (1-gamma)
    double state_cross = 0.0;      // 2 sigma ||P|| ||x|| gamma / (1-gamma rho)
    double noise_cross = 0.0;      // 2 sigma^2 ||P|| gamma rho / ((1-gamma)(1-rho))
  } components;
};

// Throws NormTooLarge when rho_K >= 1 (the bound needs ||A_K|| < 1).
TruncationBoundReport truncation_bound(const ClosedLoopModel& closed_loop,
                                       const Eigen::VectorXd& x0, double gamma,
                                       double sigma2, double f_max, int N,
                                       double target = 0.01);

// Smallest integer N >= 0 with c0 * gamma^N <= target. Computed in log space
// with a relative guard, then verified by direct multiplication.
int required_N(double c0, double target, double gamma);

struct VarianceBound {
  double second_moment_bound = 0.0;
  double variance_bound = 0.0;
};

// Second-moment and variance bounds for the exact return under a zero-mean
// disturbance with E||w||^4 <= sigma4_4. The variance bound subtracts the
// exact squared mean (computed from the noise model's second-moment matrix).
VarianceBound variance_bound(const ClosedLoopModel& closed_loop,
                             const Eigen::VectorXd& x0, double gamma,
                             const MomentBounds& moments, const NoiseModel& noise);

}  // namespace dlqr

#endif  // DLQR_MODEL_BASED_HPP_

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

#ifndef DLQR_LQG_HPP_
#define DLQR_LQG_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "dlqr/model_based.hpp"
#include "dlqr/noise.hpp"
#include "dlqr/system.hpp"

namespace dlqr {

// Output-feedback problem: x+ = A x + B u + v, y = C x + s, with a Luenberger
// observer xhat+ = A xhat + B u + L (y - C xhat) and policy u = K xhat.
// Both noises must be zero mean so the stacked disturbance stays i.i.d.
struct PartiallyObservableProblem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  double gamma = 0.0;
  NoiseModel process_noise;
  NoiseModel obs_noise;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index p() const { return B.cols(); }
  Eigen::Index l() const { return C.rows(); }
  void validate() const;
};

// The stacked (state, estimation error) loop. Blocks:
//   A_bar = [A+BK, -BK; 0, A-LC],  Q_bar = [Q+K'RK, -K'RK; -K'RK, K'RK],
//   noise_bar = law of F [v; s] with F = [I, 0; I, -L].
struct AugmentedSystem {
  Eigen::MatrixXd A_bar;
  Eigen::MatrixXd Q_bar;
  Eigen::MatrixXd F;
  Eigen::MatrixXd K;
  Eigen::MatrixXd L;
  Eigen::MatrixXd P_bar;  // discounted Lyapunov solution of (A_bar, Q_bar)
  NoiseModel noise_bar;
  double sigma_bar2 = 0.0;  // E||noise_bar||^2
  double rho_bar = 0.0;     // spectral norm of A_bar
  double gamma = 0.0;

  // The augmented loop viewed as a fully observable closed loop, so the
  // return-distribution machinery can be reused verbatim.
  ClosedLoopModel as_closed_loop() const;
};

// Throws NotStable when sqrt(gamma) * A_bar has spectral radius >= 1 - 1e-9.
AugmentedSystem build_augmented(const PartiallyObservableProblem& prob,
                                const Eigen::MatrixXd& K, const Eigen::MatrixXd& L);

// One draw of the truncated output-feedback return from the stacked initial
// state x_bar = [x0; x0 - xhat0]. Delegates to sample_truncated_return on
// (A_bar, Q_bar, P_bar, noise_bar) - the identical code path.
double sample_lqg_return(const AugmentedSystem& aug, const Eigen::VectorXd& x_bar0,
                         int N, Rng& rng);

EmpiricalDistribution sample_lqg_return_distribution(const AugmentedSystem& aug,
                                                     const Eigen::VectorXd& x_bar0,
                                                     int N, std::size_t M,
                                                     std::uint64_t master_seed,
                                                     unsigned threads = 1);

// The norm-based bounds evaluated on the augmented loop. Each report is
// absent when its applicability condition fails; `norm_note` then says why
// (typically ||A_bar|| >= 1 even though the loop is stable, which makes the
// bounds inapplicable without making sampling invalid).
struct LqgBoundReports {
  std::optional<TruncationBoundReport> truncation;
  std::optional<VarianceBound> variance;
  double rho_bar = 0.0;
  double spec_radius = 0.0;
  std::string norm_note;
};

LqgBoundReports lqg_bounds(const AugmentedSystem& aug, const Eigen::VectorXd& x_bar0,
                           double f_max, int N, double target = 0.01);

// One observer-loop trajectory cost sum_{t=0}^T gamma^t (x'Qx + u'Ru).
// When aug_cost_out is non-null it receives the same trajectory's cost in
// stacked form, sum gamma^t x_bar' Q_bar x_bar, which agrees to roundoff.
double observer_rollout_cost(const PartiallyObservableProblem& prob,
                             const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& xhat0,
                             int T, Rng& rng, double* aug_cost_out = nullptr);

// Monte Carlo baseline over M observer-loop trajectories (per-index
// substreams, order independent).
EmpiricalDistribution evaluate_lqg_monte_carlo(const PartiallyObservableProblem& prob,
                                               const Eigen::MatrixXd& K,
                                               const Eigen::MatrixXd& L,
                                               const Eigen::VectorXd& x0,
                                               const Eigen::VectorXd& xhat0, int T,
                                               std::size_t M, std::uint64_t master_seed,
                                               unsigned threads = 1);

// Steady-state Kalman gain from the (undiscounted) filter Riccati iteration.
// Convenience for picking an observer gain; the evaluated theory takes L as
// given.
Eigen::MatrixXd kalman_observer_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                     const Eigen::MatrixXd& process_cov,
                                     const Eigen::MatrixXd& obs_cov);

}  // namespace dlqr

#endif  // DLQR_LQG_HPP_

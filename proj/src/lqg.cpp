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

#include "dlqr/lqg.hpp"

#include <cmath>
#include <string>

#include "dlqr/errors.hpp"
#include "dlqr/parallel.hpp"

namespace dlqr {

void PartiallyObservableProblem::validate() const {
  DiscountedLQRProblem base{A, B, Q, R, gamma};
  base.validate();
  if (C.cols() != A.rows()) {
    throw DimensionMismatch("C must have n columns");
  }
  if (process_noise.dim() != A.rows()) {
    throw DimensionMismatch("process noise dimension must equal n");
  }
  if (obs_noise.dim() != C.rows()) {
    throw DimensionMismatch("observation noise dimension must equal the output dimension");
  }
  if (!process_noise.zero_mean() || !obs_noise.zero_mean()) {
    throw NonZeroMean("output-feedback evaluation requires zero-mean noises");
  }
}

AugmentedSystem build_augmented(const PartiallyObservableProblem& prob,
                                const Eigen::MatrixXd& K, const Eigen::MatrixXd& L) {
  prob.validate();
  const Eigen::Index n = prob.n();
  const Eigen::Index l = prob.l();
  if (K.rows() != prob.p() || K.cols() != n) {
    throw DimensionMismatch("K must be p x n");
  }
  if (L.rows() != n || L.cols() != l) {
    throw DimensionMismatch("L must be n x l");
  }
  const Eigen::MatrixXd BK = prob.B * K;
  const Eigen::MatrixXd KRK = K.transpose() * prob.R * K;

  Eigen::MatrixXd A_bar = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A_bar.topLeftCorner(n, n) = prob.A + BK;
  A_bar.topRightCorner(n, n) = -BK;
  A_bar.bottomRightCorner(n, n) = prob.A - L * prob.C;

  Eigen::MatrixXd Q_bar(2 * n, 2 * n);
  Q_bar.topLeftCorner(n, n) = prob.Q + KRK;
  Q_bar.topRightCorner(n, n) = -KRK;
  Q_bar.bottomLeftCorner(n, n) = -KRK;
  Q_bar.bottomRightCorner(n, n) = KRK;

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(2 * n, n + l);
  F.topLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  F.bottomLeftCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  F.bottomRightCorner(n, l) = -L;

  if (!is_discounted_stable(A_bar, prob.gamma)) {
    throw NotStable("augmented loop is unstable in the discounted sense; "
                    "check that K stabilizes A+BK and L stabilizes A-LC");
  }

  AugmentedSystem aug{
      A_bar,
      Q_bar,
      F,
      K,
      L,
      solve_discounted_lyapunov(A_bar, Q_bar, prob.gamma),
      NoiseModel::linear_image(F, prob.process_noise, prob.obs_noise),
      0.0,
      spectral_norm(A_bar),
      prob.gamma};
  aug.sigma_bar2 = aug.noise_bar.moment_bounds().sigma2;
  return aug;
}

ClosedLoopModel AugmentedSystem::as_closed_loop() const {
  ClosedLoopModel m;
  m.K = K;
  m.A_K = A_bar;
  m.Q_K = Q_bar;
  m.P = P_bar;
  m.rho_K = rho_bar;
  m.spec_radius = spectral_radius(A_bar);
  m.gamma = gamma;
  return m;
}

double sample_lqg_return(const AugmentedSystem& aug, const Eigen::VectorXd& x_bar0,
                         int N, Rng& rng) {
  TruncatedReturnSpec spec{aug.as_closed_loop(), aug.noise_bar, x_bar0, aug.gamma, N};
  spec.validate();
  return sample_truncated_return(spec, rng);
}

EmpiricalDistribution sample_lqg_return_distribution(const AugmentedSystem& aug,
                                                     const Eigen::VectorXd& x_bar0,
                                                     int N, std::size_t M,
                                                     std::uint64_t master_seed,
                                                     unsigned threads) {
  TruncatedReturnSpec spec{aug.as_closed_loop(), aug.noise_bar, x_bar0, aug.gamma, N};
  return sample_return_distribution(spec, M, master_seed, threads);
}

LqgBoundReports lqg_bounds(const AugmentedSystem& aug, const Eigen::VectorXd& x_bar0,
                           double f_max, int N, double target) {
  LqgBoundReports out;
  out.rho_bar = aug.rho_bar;
  out.spec_radius = spectral_radius(aug.A_bar);
  const ClosedLoopModel loop = aug.as_closed_loop();
  const MomentBounds moments = aug.noise_bar.moment_bounds();
  try {
    out.truncation =
        truncation_bound(loop, x_bar0, aug.gamma, moments.sigma2, f_max, N, target);
  } catch (const NormTooLarge&) {
  }
  try {
    out.variance = variance_bound(loop, x_bar0, aug.gamma, moments, aug.noise_bar);
  } catch (const NormTooLarge&) {
  }
  if (!out.truncation || !out.variance) {
    out.norm_note =
        "||A_bar|| = " + std::to_string(out.rho_bar) +
        " >= 1: the norm-based bounds are inapplicable here, although the loop "
        "is stable (spectral radius " +
        std::to_string(out.spec_radius) + " < 1) and sampling remains exact";
  }
  return out;
}

double observer_rollout_cost(const PartiallyObservableProblem& prob,
                             const Eigen::MatrixXd& K, const Eigen::MatrixXd& L,
                             const Eigen::VectorXd& x0, const Eigen::VectorXd& xhat0,
                             int T, Rng& rng, double* aug_cost_out) {
  const Eigen::Index n = prob.n();
  if (x0.size() != n || xhat0.size() != n) {
    throw DimensionMismatch("x0 and xhat0 must have the state dimension");
  }
  const Eigen::MatrixXd KRK = K.transpose() * prob.R * K;
  Eigen::MatrixXd Q_bar(2 * n, 2 * n);
  Q_bar.topLeftCorner(n, n) = prob.Q + KRK;
  Q_bar.topRightCorner(n, n) = -KRK;
  Q_bar.bottomLeftCorner(n, n) = -KRK;
  Q_bar.bottomRightCorner(n, n) = KRK;

  Eigen::VectorXd x = x0;
  Eigen::VectorXd xhat = xhat0;
  double cost = 0.0;
  double aug_cost = 0.0;
  double discount = 1.0;
  for (int t = 0;; ++t) {
    const Eigen::VectorXd u = K * xhat;
    cost += discount * (x.dot(prob.Q * x) + u.dot(prob.R * u));
    Eigen::VectorXd x_bar(2 * n);
    x_bar << x, x - xhat;
    aug_cost += discount * x_bar.dot(Q_bar * x_bar);
    if (t == T) break;
    const Eigen::VectorXd v = prob.process_noise.sample(rng);
    const Eigen::VectorXd s = prob.obs_noise.sample(rng);
    const Eigen::VectorXd y = prob.C * x + s;
    const Eigen::VectorXd xhat_next =
        prob.A * xhat + prob.B * u + L * (y - prob.C * xhat);
    x = prob.A * x + prob.B * u + v;
    xhat = xhat_next;
    if (x.norm() > 1e12) {
      throw TrajectoryOverflow("observer-loop state exceeded 1e12", 0);
    }
    discount *= prob.gamma;
  }
  if (aug_cost_out) *aug_cost_out = aug_cost;
  return cost;
}

EmpiricalDistribution evaluate_lqg_monte_carlo(const PartiallyObservableProblem& prob,
                                               const Eigen::MatrixXd& K,
                                               const Eigen::MatrixXd& L,
                                               const Eigen::VectorXd& x0,
                                               const Eigen::VectorXd& xhat0, int T,
                                               std::size_t M, std::uint64_t master_seed,
                                               unsigned threads) {
  prob.validate();
  if (M == 0) throw TooFewSamples("trajectory count M must be positive");
  std::vector<double> costs(M);
  parallel_for(M, threads, [&](std::size_t m) {
    Rng rng = Rng::substream(master_seed, m);
    costs[m] = observer_rollout_cost(prob, K, L, x0, xhat0, T, rng);
  });
  SeedInfo info{master_seed, "observer_rollout(T=" + std::to_string(T) +
                                 ",M=" + std::to_string(M) + ")"};
  return EmpiricalDistribution(std::move(costs), std::move(info));
}

Eigen::MatrixXd kalman_observer_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                                     const Eigen::MatrixXd& process_cov,
                                     const Eigen::MatrixXd& obs_cov) {
  // filter Riccati iteration: S+ = A S A' - A S C'(C S C' + W)^{-1} C S A' + V
  Eigen::MatrixXd S = process_cov;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::MatrixXd CSC = C * S * C.transpose() + obs_cov;
    const Eigen::MatrixXd gain = S * C.transpose() * CSC.ldlt().solve(Eigen::MatrixXd::Identity(CSC.rows(), CSC.cols()));
    Eigen::MatrixXd next =
        A * (S - gain * C * S) * A.transpose() + process_cov;
    next = symmetrize(next);
    const double diff = (next - S).norm();
    S = next;
    if (S.norm() > 1e12) {
      throw NotStabilizable("filter Riccati iteration diverged; (A, C) appears not detectable");
    }
    if (diff < 1e-12) {
      const Eigen::MatrixXd CSC2 = C * S * C.transpose() + obs_cov;
      return A * S * C.transpose() *
             CSC2.ldlt().solve(Eigen::MatrixXd::Identity(CSC2.rows(), CSC2.cols()));
    }
  }
  throw NoConvergence("filter Riccati iteration hit the iteration cap");
}

}  // namespace dlqr

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

#include "dlqr/model_based.hpp"

#include <cmath>
#include <string>

#include "dlqr/errors.hpp"
#include "dlqr/parallel.hpp"

namespace dlqr {

void TruncatedReturnSpec::validate() const {
  if (noise.dim() != x0.size() || closed_loop.A_K.rows() != x0.size()) {
    throw DimensionMismatch("truncated return: state, noise and closed-loop dimensions disagree");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("gamma must lie strictly inside (0, 1)");
  }
  if (N < 0) {
    throw ConfigError("N must be nonnegative");
  }
  if (!is_discounted_stable(closed_loop.A_K, gamma)) {
    throw NotStable("closed loop is unstable in the discounted sense");
  }
}

double sample_truncated_return(const TruncatedReturnSpec& spec, Rng& rng) {
  const Eigen::MatrixXd& A_K = spec.closed_loop.A_K;
  const Eigen::MatrixXd& P = spec.closed_loop.P;
  double total = spec.x0.dot(P * spec.x0);
  Eigen::VectorXd a = A_K * spec.x0;                         // A_K^{k+1} x
  Eigen::VectorXd s = Eigen::VectorXd::Zero(spec.x0.size()); // sum A_K^{k-tau} w_tau
  double discount = spec.gamma;
  for (int k = 0; k < spec.N; ++k) {
    const Eigen::VectorXd w = spec.noise.sample(rng);
    const Eigen::VectorXd Pw = P * w;
    total += discount * (2.0 * Pw.dot(a) + Pw.dot(w) + 2.0 * Pw.dot(s));
    s = A_K * (s + w);
    a = A_K * a;
    discount *= spec.gamma;
  }
  return total;
}

EmpiricalDistribution sample_return_distribution(const TruncatedReturnSpec& spec,
                                                 std::size_t M,
                                                 std::uint64_t master_seed,
                                                 unsigned threads) {
  spec.validate();
  if (M == 0) throw TooFewSamples("sample count must be positive");
  std::vector<double> samples(M);
  parallel_for(M, threads, [&](std::size_t m) {
    Rng rng = Rng::substream(master_seed, m);
    samples[m] = sample_truncated_return(spec, rng);
  });
  SeedInfo info{master_seed,
                "truncated_return(N=" + std::to_string(spec.N) +
                    ",M=" + std::to_string(M) + "," + spec.noise.describe() + ")"};
  return EmpiricalDistribution(std::move(samples), std::move(info));
}

double analytic_mean(const ClosedLoopModel& closed_loop, const Eigen::VectorXd& x0,
                     double gamma, const NoiseModel& noise) {
  if (!noise.zero_mean()) {
    throw NonZeroMean("analytic mean formula assumes a zero-mean disturbance");
  }
  const double quad = x0.dot(closed_loop.P * x0);
  const double trace_term = (closed_loop.P * noise.second_moment()).trace();
  return quad + gamma / (1.0 - gamma) * trace_term;
}

TruncationBoundReport truncation_bound(const ClosedLoopModel& closed_loop,
                                       const Eigen::VectorXd& x0, double gamma,
                                       double sigma2, double f_max, int N,
                                       double target) {
  const double rho = closed_loop.rho_K;
  if (rho >= 1.0) {
    throw NormTooLarge("truncation bound needs ||A_K|| < 1 (spectral norm), got " +
                       std::to_string(rho));
  }
  if (gamma * rho >= 1.0) {
    throw NormTooLarge("truncation bound needs gamma * ||A_K|| < 1");
  }
  const double sigma = std::sqrt(sigma2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(closed_loop.P, Eigen::EigenvaluesOnly);
  const double lam_max = es.eigenvalues().maxCoeff();
  const double norm_P = spectral_norm(closed_loop.P);
  TruncationBoundReport r;
  r.components.quadratic_noise = lam_max * sigma2 * gamma / (1.0 - gamma);
  r.components.state_cross =
      2.0 * sigma * norm_P * x0.norm() * gamma / (1.0 - gamma * rho);
  r.components.noise_cross =
      2.0 * sigma2 * norm_P * gamma * rho / ((1.0 - gamma) * (1.0 - rho));
  r.c0 = f_max * (r.components.quadratic_noise + r.components.state_cross +
                  r.components.noise_cross);
  r.f_max_used = f_max;
  r.N = N;
  r.bound_at_N = r.c0 * std::pow(gamma, N);
  r.target = target;
  r.N_required = (r.c0 > 0.0 && target > 0.0) ? required_N(r.c0, target, gamma) : 0;
  return r;
}

int required_N(double c0, double target, double gamma) {
  if (!(c0 > 0.0)) throw ConfigError("required_N needs c0 > 0");
  if (!(target > 0.0)) throw ConfigError("required_N needs target > 0");
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("required_N needs gamma in (0, 1)");
  if (c0 <= target) return 0;
  // log-space estimate with a relative guard, then verify directly to dodge
  // floating-point off-by-one at the boundary
  int n = static_cast<int>(std::ceil(std::log(target / c0) / std::log(gamma) - 1e-12));
  if (n < 0) n = 0;
  while (n > 0 && c0 * std::pow(gamma, n - 1) <= target) --n;
  while (c0 * std::pow(gamma, n) > target) ++n;
  return n;
}

VarianceBound variance_bound(const ClosedLoopModel& closed_loop,
                             const Eigen::VectorXd& x0, double gamma,
                             const MomentBounds& moments, const NoiseModel& noise) {
  if (!moments.zero_mean) {
    throw NonZeroMean("variance bound assumes a zero-mean disturbance");
  }
  const double rho = closed_loop.rho_K;
  if (rho >= 1.0) {
    throw NormTooLarge("variance bound needs ||A_K|| < 1 (spectral norm)");
  }
  const double norm_P = spectral_norm(closed_loop.P);
  const double p2 = norm_P * norm_P;
  const double x2 = x0.squaredNorm();
  const double s44 = moments.sigma4_4;
  const double s42 = std::sqrt(s44);  // sigma_4^2
  const double g2 = gamma * gamma;
  VarianceBound out;
  out.second_moment_bound =
      4.0 * x2 * x2 * p2 + 4.0 * s44 * p2 * g2 / ((1.0 - gamma) * (1.0 - gamma)) +
      16.0 * p2 * x2 * s42 * g2 * rho * rho / ((1.0 - gamma * rho) * (1.0 - gamma * rho)) +
      16.0 * p2 * s44 * rho * rho * g2 * g2 / ((1.0 - rho * rho) * (1.0 - g2));
  const double mean = analytic_mean(closed_loop, x0, gamma, noise);
  out.variance_bound = out.second_moment_bound - mean * mean;
  return out;
}

}  // namespace dlqr

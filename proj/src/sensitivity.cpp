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

#include "dlqr/sensitivity.hpp"

#include <cmath>
#include <string>

#include "dlqr/errors.hpp"
#include "dlqr/parallel.hpp"

namespace dlqr {

Perturbation Perturbation::make(const Eigen::MatrixXd& dA, const Eigen::MatrixXd& dB,
                                const Eigen::MatrixXd& K) {
  if (dA.rows() != dA.cols() || dB.rows() != dA.rows() || K.rows() != dB.cols() ||
      K.cols() != dA.cols()) {
    throw DimensionMismatch("perturbation blocks must match the system dimensions");
  }
  Perturbation p;
  p.dA = dA;
  p.dB = dB;
  p.dA_K = dA + dB * K;
  return p;
}

Perturbation Perturbation::relative(const DiscountedLQRProblem& prob,
                                    const Eigen::MatrixXd& K, double eps_A,
                                    double eps_B) {
  return make(eps_A * prob.A, eps_B * prob.B, K);
}

ClosedLoopModel perturbed_closed_loop(const DiscountedLQRProblem& prob,
                                      const Eigen::MatrixXd& K,
                                      const Perturbation& pert, double gamma) {
  DiscountedLQRProblem perturbed = prob;
  perturbed.A += pert.dA;
  perturbed.B += pert.dB;
  perturbed.gamma = gamma;
  // same K, same Q_K; only the loop matrix and its Lyapunov solution move
  return make_closed_loop(perturbed, K);
}

LyapunovSensitivity lyapunov_sensitivity_bound(const ClosedLoopModel& closed_loop,
                                               const Perturbation& pert, double gamma) {
  LyapunovSensitivity out;
  const double akf = closed_loop.A_K.norm();
  const double dakf = pert.dA_K.norm();
  out.epsilon = gamma * akf * dakf + 0.5 * gamma * dakf * dakf;
  out.l = kron_gap(closed_loop.A_K, gamma).l;
  out.applicable = out.l > 2.0 * out.epsilon;
  if (out.applicable) {
    out.bound_F = 2.0 * closed_loop.P.norm() * out.epsilon / (out.l - 2.0 * out.epsilon);
  }
  return out;
}

SensitivityReport sensitivity_constants(const ClosedLoopModel& closed_loop,
                                        const ClosedLoopModel& perturbed,
                                        const Perturbation& pert,
                                        const Eigen::VectorXd& x0, double gamma,
                                        double sigma2, double f_tilde_max) {
  SensitivityReport r;
  r.f_tilde_max = f_tilde_max;
  r.rho = std::max(closed_loop.rho_K, perturbed.rho_K);
  if (r.rho >= 1.0) {
    throw NormTooLarge("sensitivity bound needs max(||A_K||, ||A_K~||) < 1, got " +
                       std::to_string(r.rho));
  }
  const LyapunovSensitivity lemma = lyapunov_sensitivity_bound(closed_loop, pert, gamma);
  r.l = lemma.l;
  r.epsilon = lemma.epsilon;
  r.lemma_bound_P = lemma.bound_F;
  if (!lemma.applicable) {
    r.applicable = false;
    return r;
  }
  r.applicable = true;
  const double rho = r.rho;
  const double sigma = std::sqrt(sigma2);
  r.rho0 = std::log(1.0 / rho);
  // (k+1) rho^k peaks at k = 0 when rho0 >= 1, else at k = (1-rho0)/rho0
  r.U = r.rho0 >= 1.0 ? 1.0 : (1.0 / r.rho0) * std::pow(rho, (1.0 - r.rho0) / r.rho0);
  const double n = static_cast<double>(closed_loop.A_K.rows());
  const double norm_P = spectral_norm(closed_loop.P);
  const double frob_P = closed_loop.P.norm();
  const double frob_AK = closed_loop.A_K.norm();
  r.c3_tilde = x0.squaredNorm() + sigma2 * gamma / (1.0 - gamma) +
               2.0 * sigma * gamma * rho / (1.0 - gamma * rho) +
               2.0 * sigma2 / ((1.0 - gamma) * (1.0 - rho));
  r.c4_tilde = 2.0 * sigma * norm_P * x0.norm() * r.U * gamma / (1.0 - gamma) +
               2.0 * sigma2 * norm_P * gamma * gamma /
                   ((1.0 - gamma) * (1.0 - rho) * (1.0 - rho));
  const double gap = r.l - 2.0 * r.epsilon;
  r.c1_tilde = f_tilde_max *
               (2.0 * r.c3_tilde * std::sqrt(n) * gamma * frob_AK * frob_P / gap + r.c4_tilde);
  r.c2_tilde = f_tilde_max * r.c3_tilde * n * gamma * frob_P / gap;
  const double d = spectral_norm(pert.dA_K);
  r.theorem_bound = r.c1_tilde * d + r.c2_tilde * d * d;
  return r;
}

double measure_sup_difference(const EmpiricalDistribution& original,
                              const EmpiricalDistribution& perturbed) {
  return ks_distance(original, perturbed);
}

PerturbedPair sample_perturbed_pair(const ClosedLoopModel& closed_loop,
                                    const ClosedLoopModel& perturbed,
                                    const NoiseModel& noise,
                                    const Eigen::VectorXd& x0, double gamma, int N,
                                    std::size_t M, std::uint64_t master_seed,
                                    unsigned threads) {
  TruncatedReturnSpec original_spec{closed_loop, noise, x0, gamma, N};
  TruncatedReturnSpec perturbed_spec{perturbed, noise, x0, gamma, N};
  original_spec.validate();
  perturbed_spec.validate();
  std::vector<double> a(M), b(M);
  parallel_for(M, threads, [&](std::size_t m) {
    Rng rng_a = Rng::substream(master_seed, m);
    Rng rng_b = Rng::substream(master_seed, m);
    a[m] = sample_truncated_return(original_spec, rng_a);
    b[m] = sample_truncated_return(perturbed_spec, rng_b);
  });
  SeedInfo info{master_seed, "perturbed_pair(N=" + std::to_string(N) +
                                 ",M=" + std::to_string(M) + ")"};
  return PerturbedPair{EmpiricalDistribution(std::move(a), info),
                       EmpiricalDistribution(std::move(b), info)};
}

}  // namespace dlqr

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

#ifndef DLQR_SENSITIVITY_HPP_
#define DLQR_SENSITIVITY_HPP_

#include <cstdint>

#include "dlqr/empirical.hpp"
#include "dlqr/model_based.hpp"
#include "dlqr/system.hpp"

namespace dlqr {

// Additive model perturbation: A -> A + dA, B -> B + dB. The induced
// closed-loop perturbation is dA_K = dA + dB * K.
struct Perturbation {
  Eigen::MatrixXd dA;
  Eigen::MatrixXd dB;
  Eigen::MatrixXd dA_K;

  static Perturbation make(const Eigen::MatrixXd& dA, const Eigen::MatrixXd& dB,
                           const Eigen::MatrixXd& K);
  // dA = eps_A * A, dB = eps_B * B.
  static Perturbation relative(const DiscountedLQRProblem& prob,
                               const Eigen::MatrixXd& K, double eps_A, double eps_B);
};

// Closed loop of the perturbed system (A + dA, B + dB) under the same K;
// its P field solves the perturbed discounted Lyapunov equation.
ClosedLoopModel perturbed_closed_loop(const DiscountedLQRProblem& prob,
                                      const Eigen::MatrixXd& K,
                                      const Perturbation& pert, double gamma);

// Frobenius bound on the Lyapunov solution shift:
// ||P - Ptilde||_F <= 2 ||P||_F eps / (l - 2 eps) whenever l > 2 eps, with
// eps = gamma ||A_K||_F ||dA_K||_F + (gamma/2) ||dA_K||_F^2 and l from the
// Kronecker gap. applicable = false reports l <= 2 eps without throwing.
struct LyapunovSensitivity {
  double epsilon = 0.0;
  double l = 0.0;
  double bound_F = 0.0;
  bool applicable = false;
};

LyapunovSensitivity lyapunov_sensitivity_bound(const ClosedLoopModel& closed_loop,
                                               const Perturbation& pert, double gamma);

// All constants of the distributional sensitivity bound
//   sup_z |F(z) - Ftilde(z)| <= c1_tilde ||dA_K|| + c2_tilde ||dA_K||^2.
struct SensitivityReport {
  double l = 0.0;
  double epsilon = 0.0;
  double U = 0.0;     // sup_k (k+1) rho^k
  double rho0 = 0.0;  // ln(1 / rho)
  double rho = 0.0;   // max(||A_K||, ||A_K perturbed||)
  double c3_tilde = 0.0;
  double c4_tilde = 0.0;
  double c1_tilde = 0.0;
  double c2_tilde = 0.0;
  double lemma_bound_P = 0.0;  // Frobenius bound on ||P - Ptilde||
  double theorem_bound = 0.0;  // c1 ||dA_K|| + c2 ||dA_K||^2
  double f_tilde_max = 0.0;
  bool applicable = false;     // l > 2 eps and rho < 1
};

// Throws NormTooLarge when max(||A_K||, ||A_K~||) >= 1; reports
// applicable = false (without throwing) when l <= 2 eps.
SensitivityReport sensitivity_constants(const ClosedLoopModel& closed_loop,
                                        const ClosedLoopModel& perturbed,
                                        const Perturbation& pert,
                                        const Eigen::VectorXd& x0, double gamma,
                                        double sigma2, double f_tilde_max);

// Sup-CDF distance between the original and perturbed empirical return
// distributions. The inputs must be built at matched settings (same N and M,
// or same T and M).
double measure_sup_difference(const EmpiricalDistribution& original,
                              const EmpiricalDistribution& perturbed);

// Samples the original and perturbed truncated returns with the SAME
// substreams (common random numbers): a zero perturbation gives bitwise equal
// sample sets and therefore a zero sup difference.
struct PerturbedPair {
  EmpiricalDistribution original;
  EmpiricalDistribution perturbed;
};

PerturbedPair sample_perturbed_pair(const ClosedLoopModel& closed_loop,
                                    const ClosedLoopModel& perturbed,
                                    const NoiseModel& noise,
                                    const Eigen::VectorXd& x0, double gamma, int N,
                                    std::size_t M, std::uint64_t master_seed,
                                    unsigned threads = 1);

}  // namespace dlqr

#endif  // DLQR_SENSITIVITY_HPP_

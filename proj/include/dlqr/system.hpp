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

#ifndef DLQR_SYSTEM_HPP_
#define DLQR_SYSTEM_HPP_

#include <Eigen/Dense>

#include "dlqr/linalg.hpp"

namespace dlqr {

// Discounted LQR problem data: dynamics x+ = A x + B u + v, stage cost
// x'Qx + u'Ru, discount gamma in (0, 1). Q and R must be symmetric positive
// definite; B must have n rows.
struct DiscountedLQRProblem {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  double gamma = 0.0;

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index p() const { return B.cols(); }

  // Throws DimensionMismatch / ConfigError on invalid data.
  void validate() const;
};

// A fixed linear policy u = K x together with everything derived from it:
// the closed loop A_K = A + B K, the stage cost matrix Q_K = Q + K'RK, the
// discounted Lyapunov solution P, and the norms the bound formulas consume.
struct ClosedLoopModel {
  Eigen::MatrixXd K;
  Eigen::MatrixXd A_K;
  Eigen::MatrixXd Q_K;
  Eigen::MatrixXd P;
  double rho_K = 0.0;        // spectral norm of A_K
  double spec_radius = 0.0;  // spectral radius of A_K
  double gamma = 0.0;
};

// Solves P = Q_K + gamma * A_K' P A_K for the unique symmetric P.
//
// Direct Kronecker vectorization solve for n <= 8 (covers every instance this
// library targets, including the 2n-dimensional augmented loops); fixed-point
// iteration above that. The result is symmetrized to suppress roundoff drift.
// Throws NotStable when sqrt(gamma)*A_K has spectral radius >= 1 - 1e-9.
Eigen::MatrixXd solve_discounted_lyapunov(const Eigen::MatrixXd& a_k,
                                          const Eigen::MatrixXd& q_k,
                                          double gamma);

struct RiccatiSolution {
  Eigen::MatrixXd P;  // fixed point of the discounted Riccati equation
  Eigen::MatrixXd K;  // optimal gain, -gamma (R + gamma B'PB)^{-1} B'PA
  int iterations = 0;
};

struct RiccatiOptions {
  double tolerance = 1e-12;   // Frobenius norm of successive P differences
  int max_iterations = 100000;
  double divergence_norm = 1e12;
};

// Value iteration on P for the discounted Riccati equation. Throws
// NoConvergence past the iteration cap and NotStabilizable when the iterates
// diverge. A p = 0 input matrix is accepted (no control authority): K is the
// 0 x n empty matrix and P is the discounted Lyapunov solution of (A, Q).
RiccatiSolution solve_discounted_riccati(const DiscountedLQRProblem& prob,
                                         const RiccatiOptions& opts = {});

struct KronGap {
  double l = 0.0;     // smallest singular value of H, i.e. 1 / ||H^{-1}||
  Eigen::MatrixXd H;  // I (x) I - gamma * A_K' (x) A_K'
};

// The Kronecker quantity entering the Lyapunov sensitivity bound. Throws
// IllConditioned when cond(H) > 1e14.
KronGap kron_gap(const Eigen::MatrixXd& a_k, double gamma);

// Assembles A_K, Q_K, P and the norms for the policy K on the given problem.
ClosedLoopModel make_closed_loop(const DiscountedLQRProblem& prob,
                                 const Eigen::MatrixXd& K);

// Same, from raw closed-loop data instead of problem + gain.
ClosedLoopModel make_closed_loop_raw(const Eigen::MatrixXd& K,
                                     const Eigen::MatrixXd& a_k,
                                     const Eigen::MatrixXd& q_k, double gamma);

}  // namespace dlqr

#endif  // DLQR_SYSTEM_HPP_

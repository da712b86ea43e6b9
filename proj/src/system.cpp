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

#include "dlqr/system.hpp"

#include <cmath>
#include <string>

#include "dlqr/errors.hpp"

namespace dlqr {

namespace {

constexpr int kKroneckerSolveMaxDim = 8;

void require_square(const Eigen::MatrixXd& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(name) + " must be square, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_symmetric(const Eigen::MatrixXd& m, const char* name) {
  require_square(m, name);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw DimensionMismatch(std::string(name) + " must be symmetric");
  }
}

// vec(P) stacking columns; vec(A' P A) = (A' (x) A') vec(P).
Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, Eigen::Index n) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
}

}  // namespace

void DiscountedLQRProblem::validate() const {
  require_square(A, "A");
  require_square(Q, "Q");
  require_square(R, "R");
  if (B.rows() != A.rows()) {
    throw DimensionMismatch("B must have as many rows as A");
  }
  if (Q.rows() != A.rows()) {
    throw DimensionMismatch("Q must match the state dimension");
  }
  if (R.rows() != B.cols()) {
    throw DimensionMismatch("R must match the input dimension");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ConfigError("gamma must lie strictly inside (0, 1)");
  }
  if (!A.allFinite() || !B.allFinite() || !Q.allFinite() || !R.allFinite()) {
    throw NonFinite("problem matrices contain NaN or Inf");
  }
  if (!is_positive_definite(Q)) {
    throw ConfigError("Q must be symmetric positive definite");
  }
  if (R.size() > 0 && !is_positive_definite(R)) {
    throw ConfigError("R must be symmetric positive definite");
  }
}

Eigen::MatrixXd solve_discounted_lyapunov(const Eigen::MatrixXd& a_k,
                                          const Eigen::MatrixXd& q_k,
                                          double gamma) {
  require_square(a_k, "A_K");
  require_symmetric(q_k, "Q_K");
  if (a_k.rows() != q_k.rows()) {
    throw DimensionMismatch("A_K and Q_K must have matching dimensions");
  }
  if (!is_discounted_stable(a_k, gamma)) {
    throw NotStable("sqrt(gamma)*A_K has spectral radius >= 1 - 1e-9");
  }
  const Eigen::Index n = a_k.rows();
  if (n <= kKroneckerSolveMaxDim) {
    const Eigen::MatrixXd at = a_k.transpose();
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n * n, n * n) - gamma * kronecker(at, at);
    Eigen::VectorXd p = H.partialPivLu().solve(vec(q_k));
    return symmetrize(unvec(p, n));
  }
  // Fixed-point iteration P <- Q_K + gamma A_K' P A_K for larger systems.
  Eigen::MatrixXd P = q_k;
  for (int it = 0; it < 1000000; ++it) {
    Eigen::MatrixXd next = q_k + gamma * a_k.transpose() * P * a_k;
    const double diff = (next - P).norm();
    P = next;
    if (diff < 1e-13 * std::max(1.0, P.norm())) {
      return symmetrize(P);
    }
  }
  throw NoConvergence("discounted Lyapunov fixed-point iteration did not converge");
}

RiccatiSolution solve_discounted_riccati(const DiscountedLQRProblem& prob,
                                         const RiccatiOptions& opts) {
  prob.validate();
  const double g = prob.gamma;
  const Eigen::MatrixXd& A = prob.A;
  const Eigen::MatrixXd& B = prob.B;
  Eigen::MatrixXd P = prob.Q;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Eigen::MatrixXd next;
    if (prob.p() == 0) {
      next = g * A.transpose() * P * A + prob.Q;
    } else {
      const Eigen::MatrixXd S = prob.R + g * B.transpose() * P * B;
      const Eigen::MatrixXd BtPA = B.transpose() * P * A;
      next = g * A.transpose() * P * A -
             g * g * A.transpose() * P * B * S.ldlt().solve(BtPA) + prob.Q;
    }
    next = symmetrize(next);
    const double diff = (next - P).norm();
    P = next;
    if (P.norm() > opts.divergence_norm) {
      throw NotStabilizable("Riccati iterates diverged; (A, B) appears not stabilizable");
    }
    if (diff < opts.tolerance) break;
  }
  if (it == opts.max_iterations) {
    throw NoConvergence("Riccati value iteration hit the iteration cap");
  }
  RiccatiSolution out;
  out.P = P;
  out.iterations = it + 1;
  if (prob.p() == 0) {
    out.K = Eigen::MatrixXd(0, prob.n());
  } else {
    const Eigen::MatrixXd S = prob.R + g * B.transpose() * P * B;
    out.K = -g * S.ldlt().solve(B.transpose() * P * A);
  }
  return out;
}

KronGap kron_gap(const Eigen::MatrixXd& a_k, double gamma) {
  require_square(a_k, "A_K");
  const Eigen::Index n = a_k.rows();
  const Eigen::MatrixXd at = a_k.transpose();
  KronGap out;
  out.H = Eigen::MatrixXd::Identity(n * n, n * n) - gamma * kronecker(at, at);
  const Eigen::VectorXd sv = out.H.jacobiSvd().singularValues();
  const double smin = sv(sv.size() - 1);
  const double smax = sv(0);
  if (smin <= 0.0 || smax / smin > 1e14) {
    throw IllConditioned("Kronecker system is numerically singular");
  }
  out.l = smin;  // ||H^{-1}||^{-1} equals the smallest singular value of H
  return out;
}

ClosedLoopModel make_closed_loop_raw(const Eigen::MatrixXd& K,
                                     const Eigen::MatrixXd& a_k,
                                     const Eigen::MatrixXd& q_k, double gamma) {
  ClosedLoopModel m;
  m.K = K;
  m.A_K = a_k;
  m.Q_K = symmetrize(q_k);
  m.P = solve_discounted_lyapunov(a_k, m.Q_K, gamma);
  m.rho_K = spectral_norm(a_k);
  m.spec_radius = spectral_radius(a_k);
  m.gamma = gamma;
  return m;
}

ClosedLoopModel make_closed_loop(const DiscountedLQRProblem& prob,
                                 const Eigen::MatrixXd& K) {
  prob.validate();
  if (K.rows() != prob.p() || K.cols() != prob.n()) {
    throw DimensionMismatch("K must be p x n");
  }
  const Eigen::MatrixXd a_k = prob.A + prob.B * K;
  const Eigen::MatrixXd q_k = prob.Q + K.transpose() * prob.R * K;
  return make_closed_loop_raw(K, a_k, q_k, prob.gamma);
}

}  // namespace dlqr

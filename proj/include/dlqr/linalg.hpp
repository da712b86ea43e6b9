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

#ifndef DLQR_LINALG_HPP_
#define DLQR_LINALG_HPP_

#include <Eigen/Dense>

namespace dlqr {

// "Stable" everywhere in this library means spectral radius < 1 - kStabilityMargin,
// so marginal systems are rejected instead of producing huge solutions.
inline constexpr double kStabilityMargin = 1e-9;

struct MatrixNorms {
  double spectral;     // largest singular value
  double frobenius;    // sqrt of sum of squares
  double spec_radius;  // largest eigenvalue modulus
};

// Throws NonFinite on NaN/Inf entries. Guarantees
// spec_radius <= spectral <= frobenius up to roundoff.
MatrixNorms matrix_norms(const Eigen::MatrixXd& m);

double spectral_norm(const Eigen::MatrixXd& m);
double spectral_radius(const Eigen::MatrixXd& m);

// True iff sqrt(gamma) * a_k has spectral radius < 1 - kStabilityMargin.
bool is_discounted_stable(const Eigen::MatrixXd& a_k, double gamma);

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// True iff m is symmetric and its smallest eigenvalue exceeds tol.
bool is_positive_definite(const Eigen::MatrixXd& m, double tol = 1e-12);

}  // namespace dlqr

#endif  // DLQR_LINALG_HPP_

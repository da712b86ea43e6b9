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

#include "dlqr/linalg.hpp"

#include <cmath>

#include "dlqr/errors.hpp"

namespace dlqr {

namespace {

void check_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) {
    throw NonFinite("matrix has NaN or Inf entries");
  }
}

}  // namespace

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixNorms matrix_norms(const Eigen::MatrixXd& m) {
  check_finite(m);
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("matrix_norms expects a square matrix");
  }
  return MatrixNorms{spectral_norm(m), m.norm(), spectral_radius(m)};
}

bool is_discounted_stable(const Eigen::MatrixXd& a_k, double gamma) {
  return std::sqrt(gamma) * spectral_radius(a_k) < 1.0 - kStabilityMargin;
}

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

bool is_positive_definite(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > tol;
}

}  // namespace dlqr

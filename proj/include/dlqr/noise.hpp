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

#ifndef DLQR_NOISE_HPP_
#define DLQR_NOISE_HPP_

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "dlqr/rng.hpp"

namespace dlqr {

// Moment envelopes consumed by the bound formulas: sigma2 bounds E||w||^2 and
// sigma4_4 bounds E||w||^4. For models built here both are exact, so the
// Jensen chain sigma2^2 <= sigma4_4 holds by construction.
struct MomentBounds {
  bool zero_mean = false;
  double sigma2 = 0.0;
  double sigma4_4 = 0.0;
};

// An i.i.d. disturbance distribution. Immutable and freely shareable across
// threads; all sampling state lives in the caller's Rng.
//
// Kinds: Gaussian(mean, cov), UniformBox(lo, hi) with independent components,
// GaussianMixture, and LinearImage (the law of F*[w1; w2] for independent
// inner draws, used for the augmented output-feedback disturbance).
class NoiseModel {
 public:
  static NoiseModel gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static NoiseModel standard_normal(int dim);
  static NoiseModel uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static NoiseModel gaussian_mixture(std::vector<double> weights,
                                     std::vector<Eigen::VectorXd> means,
                                     std::vector<Eigen::MatrixXd> covs);
  static NoiseModel linear_image(Eigen::MatrixXd map, NoiseModel first,
                                 NoiseModel second);

  int dim() const { return dim_; }

  // One draw. Identical seed and draw index give identical output.
  Eigen::VectorXd sample(Rng& rng) const;

  // Exact moments: E||w||^2 from the second-moment matrix and E||w||^4 by an
  // exact quartic expansion (Isserlis is the Gaussian special case; mixtures
  // and linear images are handled by conditioning on mixture atoms).
  MomentBounds moment_bounds() const;

  // Density at x. Throws DegenerateDistribution for point masses and for
  // linear images (the pushforward need not have a density).
  double pdf(const Eigen::VectorXd& x) const;

  Eigen::VectorXd mean() const;
  Eigen::MatrixXd second_moment() const;  // E[w w']
  Eigen::MatrixXd covariance() const;
  bool zero_mean(double tol = 1e-12) const;

  std::string describe() const;

 private:
  struct GaussianKind {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    Eigen::MatrixXd factor;  // PSD square root, sample = mean + factor * z
  };
  struct UniformBoxKind {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
  };
  struct MixtureKind {
    std::vector<double> weights;
    std::vector<GaussianKind> components;
  };
  struct LinearImageKind {
    Eigen::MatrixXd map;
    std::shared_ptr<const NoiseModel> first;
    std::shared_ptr<const NoiseModel> second;
  };
  using Kind = std::variant<GaussianKind, UniformBoxKind, MixtureKind, LinearImageKind>;

  // One term of the conditional decomposition: with probability `weight` the
  // draw is shift + lin * z with z independent symmetric components whose
  // second/fourth raw moments are m2/m4 (1/3 for a standard normal, 1/3 and
  // 1/5 for unit uniforms). Exact moments of any model reduce to sums over
  // atoms.
  struct Atom {
    double weight;
    Eigen::VectorXd shift;
    Eigen::MatrixXd lin;
    Eigen::VectorXd m2;
    Eigen::VectorXd m4;
  };

  NoiseModel(Kind kind, int dim);
  std::vector<Atom> atoms() const;

  Kind kind_;
  int dim_;
};

}  // namespace dlqr

#endif  // DLQR_NOISE_HPP_

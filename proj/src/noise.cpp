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

#include "dlqr/noise.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "dlqr/errors.hpp"
#include "dlqr/linalg.hpp"

namespace dlqr {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// PSD square root via the eigendecomposition; tolerates zero eigenvalues so
// degenerate (point-mass) covariances sample correctly.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(cov));
  const double lmin = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (lmin < -1e-10 * scale) {
    throw ConfigError("covariance must be positive semidefinite");
  }
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double gaussian_pdf(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                    const Eigen::VectorXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(cov));
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() <= 1e-14 * std::max(1.0, lmax)) {
    throw DegenerateDistribution("pdf undefined for a singular covariance");
  }
  const Eigen::VectorXd d = x - mean;
  const Eigen::VectorXd y = es.eigenvectors().transpose() * d;
  const double quad = (y.array().square() / es.eigenvalues().array()).sum();
  const double logdet = es.eigenvalues().array().log().sum();
  const int n = static_cast<int>(x.size());
  return std::exp(-0.5 * (quad + logdet + n * std::log(kTwoPi)));
}

}  // namespace

NoiseModel::NoiseModel(Kind kind, int dim) : kind_(std::move(kind)), dim_(dim) {}

NoiseModel NoiseModel::gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  if (cov.rows() != cov.cols() || mean.size() != cov.rows()) {
    throw DimensionMismatch("gaussian noise: mean and covariance sizes disagree");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw NonFinite("gaussian noise parameters contain NaN or Inf");
  }
  GaussianKind g{std::move(mean), symmetrize(cov), {}};
  g.factor = psd_sqrt(g.cov);
  const int n = static_cast<int>(g.mean.size());
  return NoiseModel(Kind(std::move(g)), n);
}

NoiseModel NoiseModel::standard_normal(int dim) {
  return gaussian(Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Identity(dim, dim));
}

NoiseModel NoiseModel::uniform_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() == 0) {
    throw DimensionMismatch("uniform box: lo and hi must have equal nonzero size");
  }
  if (!lo.allFinite() || !hi.allFinite()) {
    throw NonFinite("uniform box bounds contain NaN or Inf");
  }
  if (((hi - lo).array() <= 0.0).any()) {
    throw ConfigError("uniform box requires lo < hi componentwise");
  }
  const int n = static_cast<int>(lo.size());
  return NoiseModel(Kind(UniformBoxKind{std::move(lo), std::move(hi)}), n);
}

NoiseModel NoiseModel::gaussian_mixture(std::vector<double> weights,
                                        std::vector<Eigen::VectorXd> means,
                                        std::vector<Eigen::MatrixXd> covs) {
  if (weights.empty() || weights.size() != means.size() || weights.size() != covs.size()) {
    throw DimensionMismatch("mixture: weights, means and covariances must align");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw ConfigError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ConfigError("mixture weights must sum to 1");
  }
  MixtureKind mix;
  mix.weights = std::move(weights);
  const Eigen::Index n = means.front().size();
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].size() != n || covs[i].rows() != n || covs[i].cols() != n) {
      throw DimensionMismatch("mixture component dimensions disagree");
    }
    GaussianKind g{std::move(means[i]), symmetrize(covs[i]), {}};
    g.factor = psd_sqrt(g.cov);
    mix.components.push_back(std::move(g));
  }
  return NoiseModel(Kind(std::move(mix)), static_cast<int>(n));
}

NoiseModel NoiseModel::linear_image(Eigen::MatrixXd map, NoiseModel first,
                                    NoiseModel second) {
  if (map.cols() != first.dim() + second.dim()) {
    throw DimensionMismatch("linear image: map columns must equal the stacked inner dimension");
  }
  LinearImageKind k;
  const int out = static_cast<int>(map.rows());
  k.map = std::move(map);
  k.first = std::make_shared<const NoiseModel>(std::move(first));
  k.second = std::make_shared<const NoiseModel>(std::move(second));
  return NoiseModel(Kind(std::move(k)), out);
}

Eigen::VectorXd NoiseModel::sample(Rng& rng) const {
  if (const auto* g = std::get_if<GaussianKind>(&kind_)) {
    Eigen::VectorXd z(dim_);
    for (int i = 0; i < dim_; ++i) z(i) = rng.normal();
    return g->mean + g->factor * z;
  }
  if (const auto* u = std::get_if<UniformBoxKind>(&kind_)) {
    Eigen::VectorXd out(dim_);
    for (int i = 0; i < dim_; ++i) out(i) = rng.uniform(u->lo(i), u->hi(i));
    return out;
  }
  if (const auto* m = std::get_if<MixtureKind>(&kind_)) {
    const double pick = rng.uniform01();
    double acc = 0.0;
    std::size_t idx = m->weights.size() - 1;
    for (std::size_t i = 0; i < m->weights.size(); ++i) {
      acc += m->weights[i];
      if (pick < acc) {
        idx = i;
        break;
      }
    }
    const GaussianKind& g = m->components[idx];
    Eigen::VectorXd z(dim_);
    for (int i = 0; i < dim_; ++i) z(i) = rng.normal();
    return g.mean + g.factor * z;
  }
  const auto& li = std::get<LinearImageKind>(kind_);
  Eigen::VectorXd stacked(li.first->dim() + li.second->dim());
  stacked.head(li.first->dim()) = li.first->sample(rng);
  stacked.tail(li.second->dim()) = li.second->sample(rng);
  return li.map * stacked;
}

std::vector<NoiseModel::Atom> NoiseModel::atoms() const {
  std::vector<Atom> out;
  if (const auto* g = std::get_if<GaussianKind>(&kind_)) {
    out.push_back(Atom{1.0, g->mean, g->factor, Eigen::VectorXd::Ones(dim_),
                       Eigen::VectorXd::Constant(dim_, 3.0)});
    return out;
  }
  if (const auto* u = std::get_if<UniformBoxKind>(&kind_)) {
    // center + halfwidth * z with z uniform on [-1, 1]: m2 = 1/3, m4 = 1/5.
    Eigen::VectorXd center = 0.5 * (u->lo + u->hi);
    Eigen::VectorXd halfwidth = 0.5 * (u->hi - u->lo);
    out.push_back(Atom{1.0, std::move(center),
                       Eigen::MatrixXd(halfwidth.asDiagonal()),
                       Eigen::VectorXd::Constant(dim_, 1.0 / 3.0),
                       Eigen::VectorXd::Constant(dim_, 1.0 / 5.0)});
    return out;
  }
  if (const auto* m = std::get_if<MixtureKind>(&kind_)) {
    for (std::size_t i = 0; i < m->weights.size(); ++i) {
      out.push_back(Atom{m->weights[i], m->components[i].mean, m->components[i].factor,
                         Eigen::VectorXd::Ones(dim_), Eigen::VectorXd::Constant(dim_, 3.0)});
    }
    return out;
  }
  const auto& li = std::get<LinearImageKind>(kind_);
  for (const Atom& a : li.first->atoms()) {
    for (const Atom& b : li.second->atoms()) {
      Atom c;
      c.weight = a.weight * b.weight;
      Eigen::VectorXd shift(a.shift.size() + b.shift.size());
      shift << a.shift, b.shift;
      c.shift = li.map * shift;
      Eigen::MatrixXd lin = Eigen::MatrixXd::Zero(shift.size(), a.lin.cols() + b.lin.cols());
      lin.topLeftCorner(a.lin.rows(), a.lin.cols()) = a.lin;
      lin.bottomRightCorner(b.lin.rows(), b.lin.cols()) = b.lin;
      c.lin = li.map * lin;
      c.m2.resize(a.m2.size() + b.m2.size());
      c.m2 << a.m2, b.m2;
      c.m4.resize(a.m4.size() + b.m4.size());
      c.m4 << a.m4, b.m4;
      out.push_back(std::move(c));
    }
  }
  return out;
}

Eigen::VectorXd NoiseModel::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  for (const Atom& a : atoms()) m += a.weight * a.shift;
  return m;
}

Eigen::MatrixXd NoiseModel::second_moment() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const Atom& a : atoms()) {
    s += a.weight * (a.shift * a.shift.transpose() +
                     a.lin * a.m2.asDiagonal() * a.lin.transpose());
  }
  return symmetrize(s);
}

Eigen::MatrixXd NoiseModel::covariance() const {
  const Eigen::VectorXd m = mean();
  return symmetrize(second_moment() - m * m.transpose());
}

bool NoiseModel::zero_mean(double tol) const {
  return mean().cwiseAbs().maxCoeff() <= tol;
}

MomentBounds NoiseModel::moment_bounds() const {
  MomentBounds out;
  out.zero_mean = zero_mean();
  out.sigma2 = second_moment().trace();
  // E||shift + lin z||^4 for independent symmetric z, exactly:
  //   q = a + b + d with a = ||shift||^2 (constant), b = 2 shift' lin z,
  //   d = z'Mz, M = lin'lin. Odd terms vanish by symmetry of z.
  double s4 = 0.0;
  for (const Atom& at : atoms()) {
    const double alpha = at.shift.squaredNorm();
    const Eigen::MatrixXd M = at.lin.transpose() * at.lin;
    const Eigen::MatrixXd MD = M * at.m2.asDiagonal();
    const double trMD = MD.trace();
    const Eigen::VectorXd gc = at.lin.transpose() * at.shift;
    double diag4 = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      diag4 += M(i, i) * M(i, i) * (at.m4(i) - 3.0 * at.m2(i) * at.m2(i));
    }
    const double e_d2 = diag4 + trMD * trMD + 2.0 * (MD * MD).trace();
    const double e_b2 = 4.0 * (gc.array().square() * at.m2.array()).sum();
    s4 += at.weight * (alpha * alpha + e_b2 + 2.0 * alpha * trMD + e_d2);
  }
  out.sigma4_4 = s4;
  return out;
}

double NoiseModel::pdf(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) {
    throw DimensionMismatch("pdf: point dimension disagrees with the model");
  }
  if (const auto* g = std::get_if<GaussianKind>(&kind_)) {
    return gaussian_pdf(g->mean, g->cov, x);
  }
  if (const auto* u = std::get_if<UniformBoxKind>(&kind_)) {
    const double vol = (u->hi - u->lo).prod();
    const bool inside = (x.array() >= u->lo.array()).all() && (x.array() <= u->hi.array()).all();
    return inside ? 1.0 / vol : 0.0;
  }
  if (const auto* m = std::get_if<MixtureKind>(&kind_)) {
    double p = 0.0;
    for (std::size_t i = 0; i < m->weights.size(); ++i) {
      p += m->weights[i] * gaussian_pdf(m->components[i].mean, m->components[i].cov, x);
    }
    return p;
  }
  throw DegenerateDistribution("pdf is not available for a linear-image noise model");
}

std::string NoiseModel::describe() const {
  if (std::holds_alternative<GaussianKind>(kind_)) {
    return "gaussian(dim=" + std::to_string(dim_) + ")";
  }
  if (std::holds_alternative<UniformBoxKind>(kind_)) {
    return "uniform_box(dim=" + std::to_string(dim_) + ")";
  }
  if (const auto* m = std::get_if<MixtureKind>(&kind_)) {
    return "gaussian_mixture(dim=" + std::to_string(dim_) +
           ", components=" + std::to_string(m->weights.size()) + ")";
  }
  const auto& li = std::get<LinearImageKind>(kind_);
  return "linear_image(" + li.first->describe() + ", " + li.second->describe() + ")";
}

}  // namespace dlqr

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
//
// End-to-end acceptance suite. Each criterion prints exactly one
// [PASS]/[FAIL] line; the process exits nonzero if any executed criterion
// fails. Criterion 1 and 12 drive the command-line binary (path via --cli).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlqr/empirical.hpp"
#include "dlqr/errors.hpp"
#include "dlqr/lqg.hpp"
#include "dlqr/model_based.hpp"
#include "dlqr/model_free.hpp"
#include "dlqr/parallel.hpp"
#include "dlqr/scenario.hpp"
#include "dlqr/sensitivity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dlqr;

namespace {

struct Context {
  std::string cli_path;
  unsigned threads = 0;
  fs::path work_dir;
};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? " ok" : " FAILED");
  }
};

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

// ---------------------------------------------------------------- shared

const Eigen::Vector3d kOnes = Eigen::Vector3d::Ones();

ClosedLoopModel datacenter_loop(double gamma) {
  const DiscountedLQRProblem prob = datacenter_problem(gamma);
  return make_closed_loop(prob, solve_discounted_riccati(prob).K);
}

double fd_peak(const ClosedLoopModel& loop, const NoiseModel& noise,
               const Eigen::VectorXd& x0, double gamma, std::uint64_t seed,
               unsigned threads) {
  TruncatedReturnSpec spec{loop, noise, x0, gamma, 60};
  return histogram_density(sample_return_distribution(spec, 200000, seed, threads)).f_max;
}

int run_cli(const Context& ctx, const std::string& args) {
  const std::string cmd = "\"" + ctx.cli_path + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << content;
}

json datacenter_config(double gamma, const fs::path& out_dir) {
  json j;
  j["system"] = {{"A", {{1.01, 0.01, 0.0}, {0.01, 1.01, 0.01}, {0.0, 0.01, 1.01}}},
                 {"B", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}};
  j["cost"] = {{"Q", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
               {"R", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
               {"gamma", gamma}};
  j["policy"] = {{"K", "riccati"}};
  j["noise"] = {{"kind", "gaussian"},
                {"mean", {0.0, 0.0, 0.0}},
                {"cov", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}};
  j["evaluation"] = {{"mode", "modelbased"}, {"x0", {1.0, 1.0, 1.0}},
                     {"N", 30}, {"M", 20000}, {"seed", 91}};
  j["output"] = {{"directory", out_dir.string()}};
  return j;
}

// -------------------------------------------------------------- criteria

// printed gain reproduction through the CLI, plus the scalar integrator gain
Outcome criterion1(const Context& ctx) {
  Outcome out;
  Eigen::MatrixXd printed(3, 3);
  printed << 56.19, 0.7692, 0.0027,
             0.7692, 56.20, 0.7692,
             0.0027, 0.7692, 56.19;  // -100 K scale
  double best_dev = 1e300;
  for (double gamma : {0.6, 0.8}) {
    const fs::path dir = ctx.work_dir / ("c1_g" + fmt(gamma, 2));
    write_file(dir / "config.json", datacenter_config(gamma, dir / "out").dump());
    const int code =
        run_cli(ctx, "riccati --config \"" + (dir / "config.json").string() + "\"");
    if (code != 0) {
      out.require(false, "cli riccati exited " + std::to_string(code));
      return out;
    }
    const json rep = json::parse(slurp(dir / "out" / "riccati_report.json"));
    Eigen::MatrixXd K(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) K(r, c) = rep["results"]["K_star"][r][c].get<double>();
    const double dev = (-100.0 * K - printed).cwiseAbs().maxCoeff();
    best_dev = std::min(best_dev, dev);
  }
  out.require(best_dev <= 5e-3, "printed-gain deviation " + fmt(best_dev) + " (best gamma)");

  const fs::path dir = ctx.work_dir / "c1_scalar";
  json j = datacenter_config(0.6, dir / "out");
  j["system"] = {{"A", {{1.0}}}, {"B", {{1.0}}}};
  j["cost"] = {{"Q", {{1.0}}}, {"R", {{1.0}}}, {"gamma", 0.6}};
  j["noise"] = {{"kind", "gaussian"}, {"mean", {0.0}}, {"cov", {{1.0}}}};
  j["evaluation"]["x0"] = {1.0};
  write_file(dir / "config.json", j.dump());
  const int code = run_cli(ctx, "riccati --config \"" + (dir / "config.json").string() + "\"");
  out.require(code == 0, "scalar riccati exit code");
  const json rep = json::parse(slurp(dir / "out" / "riccati_report.json"));
  const double k = rep["results"]["K_star"][0][0].get<double>();
  out.require(std::abs(k - (-0.4684)) <= 5e-5, "scalar gain " + fmt(k, 6));
  return out;
}

// sample-size planning table, exact M values and negligible truncation
Outcome criterion2(const Context& ctx) {
  Outcome out;
  const NoiseModel noise = NoiseModel::standard_normal(3);
  double worst_trunc = 0.0;
  for (double gamma : {0.6, 0.8}) {
    const ClosedLoopModel loop = datacenter_loop(gamma);
    const double f_max = fd_peak(loop, noise, kOnes, gamma, 0xC2 + int(gamma * 10), ctx.threads);
    const ModelFreeBoundReport mf =
        model_free_bound(loop, kOnes, gamma, 3.0, f_max, 100, 1000, 0.05);
    worst_trunc = std::max(worst_trunc, mf.truncation_term);
  }
  out.require(worst_trunc < 1e-9, "truncation term at T=100 is " + fmt(worst_trunc, 3));

  const long long want_raw[] = {3745, 5757, 14979, 23026};
  const long long want_round[] = {4000, 6000, 15000, 23000};
  const double targets[] = {0.02, 0.02, 0.01, 0.01};
  const double deltas[] = {0.05, 0.01, 0.05, 0.01};
  for (int i = 0; i < 4; ++i) {
    const SampleSizePlan plan = plan_sample_size(targets[i], deltas[i], worst_trunc);
    out.require(std::llabs(plan.M_raw - want_raw[i]) <= 1,
                "M_raw(" + fmt(targets[i], 3) + "," + fmt(deltas[i], 3) + ")=" +
                    std::to_string(plan.M_raw));
    out.require(plan.M_rounded == want_round[i], "M_rounded=" + std::to_string(plan.M_rounded));
  }
  return out;
}

// truncation-depth table: exact N from the published constants, and the
// estimator-based constants within a factor of two
Outcome criterion3(const Context& ctx) {
  Outcome out;
  out.require(required_N(0.5447, 0.01, 0.6) == 8, "N(0.5447, 0.01, 0.6)");
  out.require(required_N(2.6134, 0.01, 0.8) == 25, "N(2.6134, 0.01, 0.8)");

  const double paper_c0[] = {0.5447, 0.5917, 1.7550, 2.6134};
  const double gammas[] = {0.6, 0.8, 0.6, 0.8};
  const double scales[] = {1.0, 1.0, 6.0, 6.0};
  const NoiseModel noise = NoiseModel::standard_normal(3);
  for (int i = 0; i < 4; ++i) {
    const ClosedLoopModel loop = datacenter_loop(gammas[i]);
    const Eigen::Vector3d x0 = scales[i] * kOnes;
    const double f_max = fd_peak(loop, noise, x0, gammas[i], 0xC30 + i, ctx.threads);
    const TruncationBoundReport tb = truncation_bound(loop, x0, gammas[i], 3.0, f_max, 30);
    const double ratio = tb.c0 / paper_c0[i];
    out.require(ratio >= 0.5 && ratio <= 2.0,
                "c0 ratio(" + fmt(gammas[i], 2) + ",x=" + fmt(scales[i], 1) + ") = " + fmt(ratio));
  }
  return out;
}

// perturbation table: measured distances, bound dominance, and constants
Outcome criterion4(const Context& ctx) {
  Outcome out;
  const double gammas[] = {0.6, 0.6, 0.8, 0.8};
  const double eps[] = {0.1, 0.4, 0.1, 0.4};
  const double paper_sup[] = {0.051, 0.24, 0.056, 0.26};
  const double sup_tol[] = {0.02, 0.04, 0.02, 0.04};
  const double paper_c1[] = {6.5, 20.3, 12.4, 30.5};
  const double paper_c2[] = {4.6, 11.9, 9.9, 20.9};
  const NoiseModel noise = NoiseModel::standard_normal(3);
  for (int i = 0; i < 4; ++i) {
    const DiscountedLQRProblem prob = datacenter_problem(gammas[i]);
    const Eigen::MatrixXd K = solve_discounted_riccati(prob).K;
    const ClosedLoopModel loop = make_closed_loop(prob, K);
    const Perturbation pert = Perturbation::relative(prob, K, eps[i], eps[i]);
    const ClosedLoopModel tilt = perturbed_closed_loop(prob, K, pert, gammas[i]);
    const PerturbedPair pair = sample_perturbed_pair(loop, tilt, noise, kOnes, gammas[i], 30,
                                                     30000, 0xC40 + i, ctx.threads);
    const double measured = measure_sup_difference(pair.original, pair.perturbed);
    out.require(std::abs(measured - paper_sup[i]) <= sup_tol[i],
                "sup diff row " + std::to_string(i + 1) + " = " + fmt(measured, 3));
    const double f_tilde = fd_peak(tilt, noise, kOnes, gammas[i], 0xC48 + i, ctx.threads);
    const SensitivityReport rep =
        sensitivity_constants(loop, tilt, pert, kOnes, gammas[i], 3.0, f_tilde);
    out.require(rep.applicable && measured <= rep.theorem_bound,
                "bound " + fmt(rep.theorem_bound, 3) + " dominates " + fmt(measured, 3));
    const double r1 = rep.c1_tilde / paper_c1[i];
    const double r2 = rep.c2_tilde / paper_c2[i];
    out.require(r1 >= 0.7 && r1 <= 1.3, "c1~ ratio = " + fmt(r1, 3));
    out.require(r2 >= 0.7 && r2 <= 1.3, "c2~ ratio = " + fmt(r2, 3));
  }
  return out;
}

// distributional fixed point on the plant and on the augmented loop
Outcome criterion5(const Context& ctx) {
  Outcome out;
  const std::size_t M = 200000;
  const int N = 30;
  {
    const ClosedLoopModel loop = datacenter_loop(0.6);
    const NoiseModel noise = NoiseModel::standard_normal(3);
    std::vector<double> lhs(M), rhs(M);
    TruncatedReturnSpec next{loop, noise, kOnes, 0.6, N + 1};
    parallel_for(M, ctx.threads, [&](std::size_t m) {
      Rng r1 = Rng::substream(0xC501, m);
      lhs[m] = sample_truncated_return(next, r1);
      Rng r2 = Rng::substream(0xC502, m);
      const Eigen::VectorXd v = noise.sample(r2);
      TruncatedReturnSpec shifted{loop, noise, loop.A_K * kOnes + v, 0.6, N};
      rhs[m] = kOnes.dot(loop.Q_K * kOnes) + 0.6 * sample_truncated_return(shifted, r2);
    });
    const double ks = ks_distance(EmpiricalDistribution(std::move(lhs)),
                                  EmpiricalDistribution(std::move(rhs)));
    out.require(ks <= 0.02, "plant fixed-point KS = " + fmt(ks, 3));
  }
  {
    const PartiallyObservableProblem prob = datacenter_observer_problem(0.6);
    const Eigen::MatrixXd K = solve_discounted_riccati(
        DiscountedLQRProblem{prob.A, prob.B, prob.Q, prob.R, 0.6}).K;
    const AugmentedSystem aug = build_augmented(prob, K, datacenter_observer_gain());
    const ClosedLoopModel loop = aug.as_closed_loop();
    Eigen::VectorXd x_bar(6);
    x_bar << 1, 1, 1, 1, 1, 1;
    std::vector<double> lhs(M), rhs(M);
    TruncatedReturnSpec next{loop, aug.noise_bar, x_bar, 0.6, N + 1};
    parallel_for(M, ctx.threads, [&](std::size_t m) {
      Rng r1 = Rng::substream(0xC503, m);
      lhs[m] = sample_truncated_return(next, r1);
      Rng r2 = Rng::substream(0xC504, m);
      const Eigen::VectorXd v = aug.noise_bar.sample(r2);
      TruncatedReturnSpec shifted{loop, aug.noise_bar, loop.A_K * x_bar + v, 0.6, N};
      rhs[m] = x_bar.dot(loop.Q_K * x_bar) + 0.6 * sample_truncated_return(shifted, r2);
    });
    const double ks = ks_distance(EmpiricalDistribution(std::move(lhs)),
                                  EmpiricalDistribution(std::move(rhs)));
    out.require(ks <= 0.02, "augmented fixed-point KS = " + fmt(ks, 3));
  }
  return out;
}

// mean identity across the three unit-variance disturbances
Outcome criterion6(const Context& ctx) {
  Outcome out;
  const DiscountedLQRProblem prob = scalar_integrator_problem(0.6);
  const ClosedLoopModel loop = make_closed_loop(prob, solve_discounted_riccati(prob).K);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const double expected = analytic_mean(loop, x, 0.6, scalar_normal_noise());
  const char* names[] = {"normal", "uniform", "bimodal"};
  const NoiseModel noises[] = {scalar_normal_noise(), scalar_uniform_noise(),
                               scalar_bimodal_noise()};
  for (int i = 0; i < 3; ++i) {
    out.require(std::abs(analytic_mean(loop, x, 0.6, noises[i]) - expected) < 1e-12,
                std::string(names[i]) + " analytic mean equality");
    TruncatedReturnSpec spec{loop, noises[i], x, 0.6, 40};
    const EmpiricalDistribution dist =
        sample_return_distribution(spec, 100000, 0xC60 + i, ctx.threads);
    const double se = std::sqrt(dist.variance() / static_cast<double>(dist.size()));
    out.require(std::abs(dist.mean() - expected) <= 4.0 * se,
                std::string(names[i]) + " mean dev " + fmt(std::abs(dist.mean() - expected), 3) +
                    " vs 4se " + fmt(4.0 * se, 3));
  }
  return out;
}

// variance bound dominance on random instances and the plant
Outcome criterion7(const Context& ctx) {
  Outcome out;
  Rng setup(0xC7);
  int violations = 0;
  int tested = 0;
  while (tested < 50) {
    const int n = 1 + static_cast<int>(setup.uniform01() * 3);
    const double gamma = 0.3 + 0.6 * setup.uniform01();
    Eigen::MatrixXd a_k(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) a_k(r, c) = setup.normal();
    const double norm = spectral_norm(a_k);
    if (norm > 0.0) a_k *= (0.15 + 0.75 * setup.uniform01()) / norm;
    Eigen::MatrixXd q_k = Eigen::MatrixXd::Identity(n, n);
    const ClosedLoopModel loop = make_closed_loop_raw(Eigen::MatrixXd::Zero(1, n), a_k, q_k, gamma);
    Eigen::VectorXd x(n);
    for (int r = 0; r < n; ++r) x(r) = 2.0 * setup.normal();
    const NoiseModel noise = NoiseModel::standard_normal(n);
    const VarianceBound vb = variance_bound(loop, x, gamma, noise.moment_bounds(), noise);
    TruncatedReturnSpec spec{loop, noise, x, gamma, 40};
    const EmpiricalDistribution dist =
        sample_return_distribution(spec, 20000, 0xC700 + tested, ctx.threads);
    if (dist.variance() > vb.variance_bound) ++violations;
    ++tested;
  }
  out.require(violations == 0, "random instances: " + std::to_string(violations) + " violations");

  const ClosedLoopModel loop = datacenter_loop(0.6);
  const NoiseModel noise = NoiseModel::standard_normal(3);
  const VarianceBound vb = variance_bound(loop, kOnes, 0.6, noise.moment_bounds(), noise);
  TruncatedReturnSpec spec{loop, noise, kOnes, 0.6, 40};
  const EmpiricalDistribution dist = sample_return_distribution(spec, 200000, 0xC7FF, ctx.threads);
  out.require(dist.variance() <= vb.variance_bound,
              "plant variance " + fmt(dist.variance()) + " <= " + fmt(vb.variance_bound));
  return out;
}

// Lyapunov sensitivity lemma dominance on 200 applicable instances
Outcome criterion8(const Context&) {
  Outcome out;
  Rng setup(0xC8);
  int applicable = 0;
  int violations = 0;
  while (applicable < 200) {
    const int n = 1 + static_cast<int>(setup.uniform01() * 4);
    const double gamma = 0.3 + 0.6 * setup.uniform01();
    Eigen::MatrixXd A(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) A(r, c) = setup.normal();
    const double rad = spectral_radius(A);
    if (rad > 0.0) A *= (0.15 + 0.6 * setup.uniform01()) / rad;
    DiscountedLQRProblem prob{A, Eigen::MatrixXd::Identity(n, n),
                              Eigen::MatrixXd::Identity(n, n),
                              Eigen::MatrixXd::Identity(n, n), gamma};
    const Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd dA(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dA(r, c) = 0.02 * setup.normal();
    const Perturbation pert = Perturbation::make(dA, Eigen::MatrixXd::Zero(n, n), K);
    if (!is_discounted_stable(A + dA, gamma)) continue;
    const ClosedLoopModel base = make_closed_loop(prob, K);
    const LyapunovSensitivity lemma = lyapunov_sensitivity_bound(base, pert, gamma);
    if (!lemma.applicable) continue;
    ++applicable;
    const ClosedLoopModel tilt = perturbed_closed_loop(prob, K, pert, gamma);
    if ((base.P - tilt.P).norm() > lemma.bound_F * (1.0 + 1e-9)) ++violations;
  }
  out.require(violations == 0, std::to_string(violations) + " violations in 200 instances");
  return out;
}

// model-based vs trajectory-sampling agreement at both discounts
Outcome criterion9(const Context& ctx) {
  Outcome out;
  const NoiseModel noise = NoiseModel::standard_normal(3);
  const double thresholds[] = {0.02, 0.03};
  const double gammas[] = {0.6, 0.8};
  for (int i = 0; i < 2; ++i) {
    const DiscountedLQRProblem prob = datacenter_problem(gammas[i]);
    const Eigen::MatrixXd K = solve_discounted_riccati(prob).K;
    const ClosedLoopModel loop = make_closed_loop(prob, K);
    TruncatedReturnSpec spec{loop, noise, kOnes, gammas[i], 30};
    const EmpiricalDistribution mb =
        sample_return_distribution(spec, 30000, 0xC90 + i, ctx.threads);
    RolloutConfig rc{100, 30000, kOnes, 0xC98ULL + static_cast<std::uint64_t>(i)};
    const EmpiricalDistribution mf = evaluate_model_free(prob, K, noise, rc, ctx.threads);
    const double ks = ks_distance(mb, mf);
    out.require(ks <= thresholds[i],
                "gamma " + fmt(gammas[i], 2) + " KS = " + fmt(ks, 3));
  }
  return out;
}

// DKW coverage experiment at the documented >= 93% rate
Outcome criterion10(const Context& ctx) {
  Outcome out;
  const DiscountedLQRProblem prob = scalar_integrator_problem(0.6);
  const Eigen::MatrixXd K = solve_discounted_riccati(prob).K;
  const NoiseModel noise = scalar_normal_noise();
  // seed family frozen for reproducibility; the coverage event itself has the
  // documented >= 93% probability per DKW
  const std::uint64_t master = 0xC10A;
  RolloutConfig ref_cfg{100, 1000000, Eigen::VectorXd::Ones(1), master};
  const EmpiricalDistribution ref = evaluate_model_free(prob, K, noise, ref_cfg, ctx.threads);
  const double threshold = dkw_epsilon(2000, 0.05) + dkw_epsilon(1000000, 0.05);
  std::vector<int> ok(200, 0);
  parallel_for(200, ctx.threads, [&](std::size_t trial) {
    RolloutConfig cfg{100, 2000, Eigen::VectorXd::Ones(1), master + 1 + trial};
    const EmpiricalDistribution hat = evaluate_model_free(prob, K, noise, cfg, 1);
    ok[trial] = ks_distance(hat, ref) <= threshold ? 1 : 0;
  });
  int passes = 0;
  for (int v : ok) passes += v;
  out.require(passes >= 186, std::to_string(passes) + "/200 trials within the envelope");
  return out;
}

// stacked-form cost identity and block eigenvalue union
Outcome criterion11(const Context&) {
  Outcome out;
  const PartiallyObservableProblem prob = datacenter_observer_problem(0.6);
  const Eigen::MatrixXd K = solve_discounted_riccati(
      DiscountedLQRProblem{prob.A, prob.B, prob.Q, prob.R, 0.6}).K;
  const Eigen::MatrixXd L = datacenter_observer_gain();
  double worst = 0.0;
  for (int traj = 0; traj < 25; ++traj) {
    Rng rng = Rng::substream(0xC11, traj);
    double aug_cost = 0.0;
    const double obs_cost = observer_rollout_cost(prob, K, L, kOnes, Eigen::Vector3d::Zero(),
                                                  150, rng, &aug_cost);
    worst = std::max(worst, std::abs(obs_cost - aug_cost) / std::max(1.0, std::abs(obs_cost)));
  }
  out.require(worst <= 1e-9, "cost identity worst relative error " + fmt(worst, 3));

  const AugmentedSystem aug = build_augmented(prob, K, L);
  Eigen::EigenSolver<Eigen::MatrixXd> whole(aug.A_bar, false);
  Eigen::EigenSolver<Eigen::MatrixXd> upper(prob.A + prob.B * K, false);
  Eigen::EigenSolver<Eigen::MatrixXd> lower(prob.A - L * prob.C, false);
  std::vector<std::complex<double>> a, b;
  for (int i = 0; i < 6; ++i) a.push_back(whole.eigenvalues()(i));
  for (int i = 0; i < 3; ++i) {
    b.push_back(upper.eigenvalues()(i));
    b.push_back(lower.eigenvalues()(i));
  }
  auto cmp = [](const std::complex<double>& x, const std::complex<double>& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), cmp);
  std::sort(b.begin(), b.end(), cmp);
  double dev = 0.0;
  for (int i = 0; i < 6; ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  out.require(dev <= 1e-8, "eigenvalue union deviation " + fmt(dev, 3));
  return out;
}

// bit-identical artifacts across repeated runs and thread counts
Outcome criterion12(const Context& ctx) {
  Outcome out;
  const fs::path dir = ctx.work_dir / "c12";
  json cfg = datacenter_config(0.6, dir / "run");
  cfg["evaluation"]["M"] = 20000;
  write_file(dir / "config.json", cfg.dump());
  const std::string base =
      "evaluate --config \"" + (dir / "config.json").string() + "\" --threads 2";
  if (run_cli(ctx, base) != 0) {
    out.require(false, "first run failed");
    return out;
  }
  std::map<std::string, std::string> snapshot;
  for (const auto& entry : fs::directory_iterator(dir / "run")) {
    snapshot[entry.path().filename().string()] = slurp(entry.path());
  }
  out.require(snapshot.size() >= 3, std::to_string(snapshot.size()) + " artifacts");
  if (run_cli(ctx, base) != 0) {
    out.require(false, "second run failed");
    return out;
  }
  bool identical = true;
  for (const auto& [name, content] : snapshot) {
    if (slurp(dir / "run" / name) != content) identical = false;
  }
  out.require(identical, "repeat run bytes");
  // thread-count invariance (stronger than required)
  if (run_cli(ctx, "evaluate --config \"" + (dir / "config.json").string() + "\" --threads 7") !=
      0) {
    out.require(false, "third run failed");
    return out;
  }
  bool same_threads = true;
  for (const auto& [name, content] : snapshot) {
    if (slurp(dir / "run" / name) != content) same_threads = false;
  }
  out.require(same_threads, "thread-count invariance");

  // modelfree path as a second command family
  json mf = cfg;
  mf["evaluation"]["mode"] = "modelfree";
  mf["evaluation"]["M"] = 4000;
  mf["output"]["directory"] = (dir / "mf").string();
  write_file(dir / "config_mf.json", mf.dump());
  const std::string mf_cmd =
      "modelfree --config \"" + (dir / "config_mf.json").string() + "\" --threads 3";
  if (run_cli(ctx, mf_cmd) != 0 ) {
    out.require(false, "modelfree run failed");
    return out;
  }
  const std::string first = slurp(dir / "mf" / "edf.csv");
  run_cli(ctx, mf_cmd);
  out.require(slurp(dir / "mf" / "edf.csv") == first, "modelfree repeat bytes");
  return out;
}

const char* kDescriptions[12] = {
    "printed-gain and scalar-gain reproduction through the CLI",
    "sample-size planning rows (M_raw/M_rounded) with negligible truncation",
    "truncation-depth planning: exact N from published constants, c0 within x2",
    "perturbation table: measured sup differences, bound dominance, constants within 30%",
    "distributional fixed point (plant and augmented) at KS <= 0.02",
    "mean identity across the three unit-variance disturbances",
    "variance bound dominance on 50 random instances plus the plant",
    "Lyapunov sensitivity lemma dominance on 200 applicable instances",
    "estimator cross-agreement (KS <= 0.02 at 0.6, <= 0.03 at 0.8)",
    "DKW coverage >= 93% over 200 seeded trials",
    "stacked-cost identity to 1e-9 and eigenvalue union to 1e-8",
    "bit-identical artifacts on repeated runs",
};

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) ctx.cli_path = argv[++i];
    else if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (arg == "--threads" && i + 1 < argc) ctx.threads = std::atoi(argv[++i]);
  }
  ctx.work_dir = fs::temp_directory_path() /
                 ("dlqr_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(ctx.work_dir);

  const std::function<Outcome(const Context&)> criteria[12] = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};

  bool all_pass = true;
  for (int c = 1; c <= 12; ++c) {
    if (only != 0 && c != only) continue;
    if ((c == 1 || c == 12) && ctx.cli_path.empty()) {
      std::cout << "[FAIL] C" << c << ": " << kDescriptions[c - 1]
                << " (needs --cli PATH)\n";
      all_pass = false;
      continue;
    }
    Outcome out;
    try {
      out = criteria[c - 1](ctx);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail += std::string("exception: ") + e.what();
    }
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " C" << c << ": "
              << kDescriptions[c - 1] << " (" << out.detail << ")\n";
    if (!out.pass) all_pass = false;
  }
  fs::remove_all(ctx.work_dir);
  return all_pass ? 0 : 1;
}

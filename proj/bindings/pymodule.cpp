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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dlqr/empirical.hpp"
#include "dlqr/errors.hpp"
#include "dlqr/lqg.hpp"
#include "dlqr/model_based.hpp"
#include "dlqr/model_free.hpp"
#include "dlqr/scenario.hpp"
#include "dlqr/sensitivity.hpp"

namespace py = pybind11;
using namespace dlqr;

PYBIND11_MODULE(_distlqr, m) {
  m.doc() = "return-distribution evaluation for discounted LQR/LQG policies";

  py::register_exception<Error>(m, "DlqrError", PyExc_RuntimeError);

  // ---- core types -------------------------------------------------------
  py::class_<DiscountedLQRProblem>(m, "DiscountedLQRProblem")
      .def(py::init([](Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd Q,
                       Eigen::MatrixXd R, double gamma) {
             DiscountedLQRProblem p{std::move(A), std::move(B), std::move(Q),
                                    std::move(R), gamma};
             p.validate();
             return p;
           }),
           py::arg("A"), py::arg("B"), py::arg("Q"), py::arg("R"), py::arg("gamma"))
      .def_readonly("A", &DiscountedLQRProblem::A)
      .def_readonly("B", &DiscountedLQRProblem::B)
      .def_readonly("Q", &DiscountedLQRProblem::Q)
      .def_readonly("R", &DiscountedLQRProblem::R)
      .def_readonly("gamma", &DiscountedLQRProblem::gamma);

  py::class_<ClosedLoopModel>(m, "ClosedLoopModel")
      .def_readonly("K", &ClosedLoopModel::K)
      .def_readonly("A_K", &ClosedLoopModel::A_K)
      .def_readonly("Q_K", &ClosedLoopModel::Q_K)
      .def_readonly("P", &ClosedLoopModel::P)
      .def_readonly("rho_K", &ClosedLoopModel::rho_K)
      .def_readonly("spec_radius", &ClosedLoopModel::spec_radius)
      .def_readonly("gamma", &ClosedLoopModel::gamma);

  py::class_<RiccatiSolution>(m, "RiccatiSolution")
      .def_readonly("P", &RiccatiSolution::P)
      .def_readonly("K", &RiccatiSolution::K)
      .def_readonly("iterations", &RiccatiSolution::iterations);

  py::class_<MatrixNorms>(m, "MatrixNorms")
      .def_readonly("spectral", &MatrixNorms::spectral)
      .def_readonly("frobenius", &MatrixNorms::frobenius)
      .def_readonly("spec_radius", &MatrixNorms::spec_radius);

  py::class_<KronGap>(m, "KronGap")
      .def_readonly("l", &KronGap::l)
      .def_readonly("H", &KronGap::H);

  m.def("matrix_norms", &matrix_norms, py::arg("m"));
  m.def("solve_discounted_lyapunov", &solve_discounted_lyapunov, py::arg("a_k"),
        py::arg("q_k"), py::arg("gamma"));
  m.def(
      "solve_discounted_riccati",
      [](const DiscountedLQRProblem& prob) { return solve_discounted_riccati(prob); },
      py::arg("problem"));
  m.def("kron_gap", &kron_gap, py::arg("a_k"), py::arg("gamma"));
  m.def("make_closed_loop", &make_closed_loop, py::arg("problem"), py::arg("K"));
  m.def("make_closed_loop_raw", &make_closed_loop_raw, py::arg("K"), py::arg("a_k"),
        py::arg("q_k"), py::arg("gamma"));

  // ---- noise ------------------------------------------------------------
  py::class_<MomentBounds>(m, "MomentBounds")
      .def_readonly("zero_mean", &MomentBounds::zero_mean)
      .def_readonly("sigma2", &MomentBounds::sigma2)
      .def_readonly("sigma4_4", &MomentBounds::sigma4_4);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("substream", &Rng::substream, py::arg("master_seed"), py::arg("index"))
      .def("uniform01", &Rng::uniform01)
      .def("normal", &Rng::normal);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("gaussian", &NoiseModel::gaussian, py::arg("mean"), py::arg("cov"))
      .def_static("standard_normal", &NoiseModel::standard_normal, py::arg("dim"))
      .def_static("uniform_box", &NoiseModel::uniform_box, py::arg("lo"), py::arg("hi"))
      .def_static("gaussian_mixture", &NoiseModel::gaussian_mixture, py::arg("weights"),
                  py::arg("means"), py::arg("covs"))
      .def_static("linear_image", &NoiseModel::linear_image, py::arg("map"),
                  py::arg("first"), py::arg("second"))
      .def_property_readonly("dim", &NoiseModel::dim)
      .def("sample", &NoiseModel::sample, py::arg("rng"))
      .def("moment_bounds", &NoiseModel::moment_bounds)
      .def("pdf", &NoiseModel::pdf, py::arg("x"))
      .def("mean", &NoiseModel::mean)
      .def("second_moment", &NoiseModel::second_moment)
      .def("covariance", &NoiseModel::covariance)
      .def("describe", &NoiseModel::describe);

  // ---- empirical distributions ------------------------------------------
  py::class_<SeedInfo>(m, "SeedInfo")
      .def(py::init<>())
      .def_readwrite("master_seed", &SeedInfo::master_seed)
      .def_readwrite("params", &SeedInfo::params);

  py::class_<EmpiricalDistribution>(m, "EmpiricalDistribution")
      .def(py::init<std::vector<double>, SeedInfo>(), py::arg("samples"),
           py::arg("seed_info") = SeedInfo{})
      .def_property_readonly("samples",
                             [](const EmpiricalDistribution& d) { return d.samples(); })
      .def("__len__", &EmpiricalDistribution::size)
      .def("edf", &EmpiricalDistribution::edf, py::arg("z"))
      .def("mean", &EmpiricalDistribution::mean)
      .def("variance", &EmpiricalDistribution::variance);

  py::class_<HistogramDensity>(m, "HistogramDensity")
      .def_readonly("bin_edges", &HistogramDensity::bin_edges)
      .def_readonly("densities", &HistogramDensity::densities)
      .def_readonly("f_max", &HistogramDensity::f_max);

  m.def("ks_distance", &ks_distance, py::arg("d1"), py::arg("d2"));
  m.def(
      "histogram_density",
      [](const EmpiricalDistribution& d) { return histogram_density(d); },
      py::arg("dist"));
  m.def(
      "histogram_density_fixed",
      [](const EmpiricalDistribution& d, int bins) { return histogram_density(d, bins); },
      py::arg("dist"), py::arg("bins"));
  m.def("dkw_epsilon", &dkw_epsilon, py::arg("m"), py::arg("delta"));

  // ---- model-based evaluation -------------------------------------------
  py::class_<TruncatedReturnSpec>(m, "TruncatedReturnSpec")
      .def(py::init([](ClosedLoopModel loop, NoiseModel noise, Eigen::VectorXd x0,
                       double gamma, int N) {
             TruncatedReturnSpec s{std::move(loop), std::move(noise), std::move(x0), gamma, N};
             s.validate();
             return s;
           }),
           py::arg("closed_loop"), py::arg("noise"), py::arg("x0"), py::arg("gamma"),
           py::arg("N"));

  m.def("sample_truncated_return", &sample_truncated_return, py::arg("spec"), py::arg("rng"));
  m.def("sample_return_distribution", &sample_return_distribution, py::arg("spec"),
        py::arg("M"), py::arg("master_seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("analytic_mean", &analytic_mean, py::arg("closed_loop"), py::arg("x0"),
        py::arg("gamma"), py::arg("noise"));

  py::class_<TruncationBoundReport::Components>(m, "TruncationBoundComponents")
      .def_readonly("quadratic_noise", &TruncationBoundReport::Components::quadratic_noise)
      .def_readonly("state_cross", &TruncationBoundReport::Components::state_cross)
      .def_readonly("noise_cross", &TruncationBoundReport::Components::noise_cross);

  py::class_<TruncationBoundReport>(m, "TruncationBoundReport")
      .def_readonly("c0", &TruncationBoundReport::c0)
      .def_readonly("f_max_used", &TruncationBoundReport::f_max_used)
      .def_readonly("bound_at_N", &TruncationBoundReport::bound_at_N)
      .def_readonly("N", &TruncationBoundReport::N)
      .def_readonly("N_required", &TruncationBoundReport::N_required)
      .def_readonly("target", &TruncationBoundReport::target)
      .def_readonly("components", &TruncationBoundReport::components);

  m.def("truncation_bound", &truncation_bound, py::arg("closed_loop"), py::arg("x0"),
        py::arg("gamma"), py::arg("sigma2"), py::arg("f_max"), py::arg("N"),
        py::arg("target") = 0.01);
  m.def("required_N", &required_N, py::arg("c0"), py::arg("target"), py::arg("gamma"));

  py::class_<VarianceBound>(m, "VarianceBound")
      .def_readonly("second_moment_bound", &VarianceBound::second_moment_bound)
      .def_readonly("variance_bound", &VarianceBound::variance_bound);

  m.def("variance_bound", &variance_bound, py::arg("closed_loop"), py::arg("x0"),
        py::arg("gamma"), py::arg("moments"), py::arg("noise"));

  // ---- model-free evaluation --------------------------------------------
  py::class_<RolloutConfig>(m, "RolloutConfig")
      .def(py::init([](int T, std::size_t M, Eigen::VectorXd x0, std::uint64_t master_seed) {
             return RolloutConfig{T, M, std::move(x0), master_seed};
           }),
           py::arg("T"), py::arg("M"), py::arg("x0"), py::arg("master_seed"))
      .def_readwrite("T", &RolloutConfig::T)
      .def_readwrite("M", &RolloutConfig::M)
      .def_readwrite("x0", &RolloutConfig::x0)
      .def_readwrite("master_seed", &RolloutConfig::master_seed);

  m.def("rollout_cost", &rollout_cost, py::arg("problem"), py::arg("K"), py::arg("x0"),
        py::arg("T"), py::arg("noise"), py::arg("rng"), py::arg("trajectory_index") = 0);
  m.def("evaluate_model_free", &evaluate_model_free, py::arg("problem"), py::arg("K"),
        py::arg("noise"), py::arg("config"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  py::class_<ModelFreeBoundReport>(m, "ModelFreeBoundReport")
      .def_readonly("dkw_term", &ModelFreeBoundReport::dkw_term)
      .def_readonly("c1", &ModelFreeBoundReport::c1)
      .def_readonly("c2", &ModelFreeBoundReport::c2)
      .def_readonly("c3", &ModelFreeBoundReport::c3)
      .def_readonly("truncation_term", &ModelFreeBoundReport::truncation_term)
      .def_readonly("total", &ModelFreeBoundReport::total)
      .def_readonly("delta", &ModelFreeBoundReport::delta);

  m.def("model_free_bound", &model_free_bound, py::arg("closed_loop"), py::arg("x0"),
        py::arg("gamma"), py::arg("sigma2"), py::arg("f_max"), py::arg("T"), py::arg("M"),
        py::arg("delta"), py::arg("use_alternate_tail_constant") = false);

  py::class_<SampleSizePlan>(m, "SampleSizePlan")
      .def_readonly("M_raw", &SampleSizePlan::M_raw)
      .def_readonly("M_rounded", &SampleSizePlan::M_rounded)
      .def_readonly("truncation_term", &SampleSizePlan::truncation_term);

  m.def("plan_sample_size", &plan_sample_size, py::arg("target_total"), py::arg("delta"),
        py::arg("truncation_term") = 0.0);

  // ---- sensitivity --------------------------------------------------------
  py::class_<Perturbation>(m, "Perturbation")
      .def_static("make", &Perturbation::make, py::arg("dA"), py::arg("dB"), py::arg("K"))
      .def_static("relative", &Perturbation::relative, py::arg("problem"), py::arg("K"),
                  py::arg("eps_A"), py::arg("eps_B"))
      .def_readonly("dA", &Perturbation::dA)
      .def_readonly("dB", &Perturbation::dB)
      .def_readonly("dA_K", &Perturbation::dA_K);

  m.def("perturbed_closed_loop", &perturbed_closed_loop, py::arg("problem"), py::arg("K"),
        py::arg("perturbation"), py::arg("gamma"));

  py::class_<LyapunovSensitivity>(m, "LyapunovSensitivity")
      .def_readonly("epsilon", &LyapunovSensitivity::epsilon)
      .def_readonly("l", &LyapunovSensitivity::l)
      .def_readonly("bound_F", &LyapunovSensitivity::bound_F)
      .def_readonly("applicable", &LyapunovSensitivity::applicable);

  m.def("lyapunov_sensitivity_bound", &lyapunov_sensitivity_bound, py::arg("closed_loop"),
        py::arg("perturbation"), py::arg("gamma"));

  py::class_<SensitivityReport>(m, "SensitivityReport")
      .def_readonly("l", &SensitivityReport::l)
      .def_readonly("epsilon", &SensitivityReport::epsilon)
      .def_readonly("U", &SensitivityReport::U)
      .def_readonly("rho0", &SensitivityReport::rho0)
      .def_readonly("rho", &SensitivityReport::rho)
      .def_readonly("c3_tilde", &SensitivityReport::c3_tilde)
      .def_readonly("c4_tilde", &SensitivityReport::c4_tilde)
      .def_readonly("c1_tilde", &SensitivityReport::c1_tilde)
      .def_readonly("c2_tilde", &SensitivityReport::c2_tilde)
      .def_readonly("lemma_bound_P", &SensitivityReport::lemma_bound_P)
      .def_readonly("theorem_bound", &SensitivityReport::theorem_bound)
      .def_readonly("f_tilde_max", &SensitivityReport::f_tilde_max)
      .def_readonly("applicable", &SensitivityReport::applicable);

  m.def("sensitivity_constants", &sensitivity_constants, py::arg("closed_loop"),
        py::arg("perturbed"), py::arg("perturbation"), py::arg("x0"), py::arg("gamma"),
        py::arg("sigma2"), py::arg("f_tilde_max"));
  m.def("measure_sup_difference", &measure_sup_difference, py::arg("original"),
        py::arg("perturbed"));

  py::class_<PerturbedPair>(m, "PerturbedPair")
      .def_readonly("original", &PerturbedPair::original)
      .def_readonly("perturbed", &PerturbedPair::perturbed);

  m.def("sample_perturbed_pair", &sample_perturbed_pair, py::arg("closed_loop"),
        py::arg("perturbed"), py::arg("noise"), py::arg("x0"), py::arg("gamma"), py::arg("N"),
        py::arg("M"), py::arg("master_seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());

  // ---- output feedback ----------------------------------------------------
  py::class_<PartiallyObservableProblem>(m, "PartiallyObservableProblem")
      .def(py::init([](Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                       Eigen::MatrixXd Q, Eigen::MatrixXd R, double gamma,
                       NoiseModel process_noise, NoiseModel obs_noise) {
             PartiallyObservableProblem p{std::move(A), std::move(B), std::move(C),
                                          std::move(Q), std::move(R), gamma,
                                          std::move(process_noise), std::move(obs_noise)};
             p.validate();
             return p;
           }),
           py::arg("A"), py::arg("B"), py::arg("C"), py::arg("Q"), py::arg("R"),
           py::arg("gamma"), py::arg("process_noise"), py::arg("obs_noise"))
      .def_readonly("A", &PartiallyObservableProblem::A)
      .def_readonly("C", &PartiallyObservableProblem::C)
      .def_readonly("gamma", &PartiallyObservableProblem::gamma);

  py::class_<AugmentedSystem>(m, "AugmentedSystem")
      .def_readonly("A_bar", &AugmentedSystem::A_bar)
      .def_readonly("Q_bar", &AugmentedSystem::Q_bar)
      .def_readonly("F", &AugmentedSystem::F)
      .def_readonly("K", &AugmentedSystem::K)
      .def_readonly("L", &AugmentedSystem::L)
      .def_readonly("P_bar", &AugmentedSystem::P_bar)
      .def_readonly("noise_bar", &AugmentedSystem::noise_bar)
      .def_readonly("sigma_bar2", &AugmentedSystem::sigma_bar2)
      .def_readonly("rho_bar", &AugmentedSystem::rho_bar)
      .def("as_closed_loop", &AugmentedSystem::as_closed_loop);

  m.def("build_augmented", &build_augmented, py::arg("problem"), py::arg("K"), py::arg("L"));
  m.def("sample_lqg_return", &sample_lqg_return, py::arg("augmented"), py::arg("x_bar0"),
        py::arg("N"), py::arg("rng"));
  m.def("sample_lqg_return_distribution", &sample_lqg_return_distribution,
        py::arg("augmented"), py::arg("x_bar0"), py::arg("N"), py::arg("M"),
        py::arg("master_seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "observer_rollout_cost",
      [](const PartiallyObservableProblem& prob, const Eigen::MatrixXd& K,
         const Eigen::MatrixXd& L, const Eigen::VectorXd& x0, const Eigen::VectorXd& xhat0,
         int T, Rng& rng) {
        double aug_cost = 0.0;
        const double cost = observer_rollout_cost(prob, K, L, x0, xhat0, T, rng, &aug_cost);
        return py::make_tuple(cost, aug_cost);
      },
      py::arg("problem"), py::arg("K"), py::arg("L"), py::arg("x0"), py::arg("xhat0"),
      py::arg("T"), py::arg("rng"));
  m.def("evaluate_lqg_monte_carlo", &evaluate_lqg_monte_carlo, py::arg("problem"),
        py::arg("K"), py::arg("L"), py::arg("x0"), py::arg("xhat0"), py::arg("T"),
        py::arg("M"), py::arg("master_seed"), py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("kalman_observer_gain", &kalman_observer_gain, py::arg("A"), py::arg("C"),
        py::arg("process_cov"), py::arg("obs_cov"));

  // ---- built-in instances -------------------------------------------------
  m.def("datacenter_problem", &datacenter_problem, py::arg("gamma"));
  m.def("scalar_integrator_problem", &scalar_integrator_problem, py::arg("gamma"));
  m.def("scalar_normal_noise", &scalar_normal_noise);
  m.def("scalar_uniform_noise", &scalar_uniform_noise);
  m.def("scalar_bimodal_noise", &scalar_bimodal_noise);
  m.def("datacenter_observation_matrix", &datacenter_observation_matrix);
  m.def("datacenter_observer_gain", &datacenter_observer_gain);
  m.def("datacenter_observer_problem", &datacenter_observer_problem, py::arg("gamma"));

#ifdef DLQR_VERSION
  m.attr("__version__") = DLQR_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}

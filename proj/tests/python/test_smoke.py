# Copyright 2026 The distlqr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import distlqr as dl


def test_riccati_scalar_integrator():
    prob = dl.scalar_integrator_problem(0.6)
    sol = dl.solve_discounted_riccati(prob)
    assert sol.K[0, 0] == pytest.approx(-0.4684, abs=5e-5)
    assert sol.P[0, 0] == pytest.approx(1.4683, abs=1e-3)


def test_riccati_matches_printed_gain_at_08():
    sol = dl.solve_discounted_riccati(dl.datacenter_problem(0.8))
    printed = -0.01 * np.array(
        [[56.19, 0.7692, 0.0027], [0.7692, 56.20, 0.7692], [0.0027, 0.7692, 56.19]]
    )
    assert np.abs(sol.K - printed).max() < 5e-5


def test_lyapunov_and_norms():
    a_k = np.array([[0.5]])
    p = dl.solve_discounted_lyapunov(a_k, np.array([[1.0]]), 0.8)
    assert p[0, 0] == pytest.approx(1.25)
    norms = dl.matrix_norms(np.diag([2.0, -3.0]))
    assert norms.spectral == pytest.approx(3.0)
    assert norms.frobenius == pytest.approx(math.sqrt(13.0))


def test_noise_moments_and_pdf():
    g = dl.NoiseModel.standard_normal(3)
    mb = g.moment_bounds()
    assert mb.zero_mean
    assert mb.sigma2 == pytest.approx(3.0)
    assert mb.sigma4_4 == pytest.approx(15.0)
    u = dl.scalar_uniform_noise()
    assert u.pdf(np.zeros(1)) == pytest.approx(1.0 / (2.0 * math.sqrt(3.0)))


def test_sampling_reproducibility():
    noise = dl.scalar_bimodal_noise()
    a = [noise.sample(dl.Rng(5))[0] for _ in range(1)]
    b = [noise.sample(dl.Rng(5))[0] for _ in range(1)]
    assert a == b


def test_truncated_return_mean():
    prob = dl.datacenter_problem(0.6)
    K = dl.solve_discounted_riccati(prob).K
    loop = dl.make_closed_loop(prob, K)
    noise = dl.NoiseModel.standard_normal(3)
    x0 = np.ones(3)
    spec = dl.TruncatedReturnSpec(loop, noise, x0, 0.6, 30)
    dist = dl.sample_return_distribution(spec, 20000, 7, threads=2)
    target = dl.analytic_mean(loop, x0, 0.6, noise)
    se = math.sqrt(dist.variance() / len(dist))
    assert abs(dist.mean() - target) < 4 * se


def test_edf_ks_and_histogram():
    d1 = dl.EmpiricalDistribution([1.0, 2.0, 3.0])
    d2 = dl.EmpiricalDistribution([2.0, 3.0, 4.0])
    assert d1.edf(2.0) == pytest.approx(2.0 / 3.0)
    assert dl.ks_distance(d1, d2) == pytest.approx(1.0 / 3.0)
    rng = dl.Rng(11)
    samples = [rng.normal() for _ in range(100000)]
    hist = dl.histogram_density(dl.EmpiricalDistribution(samples))
    assert 0.36 <= hist.f_max <= 0.44


def test_planning_rows():
    assert dl.plan_sample_size(0.02, 0.05).M_raw == 3745
    assert dl.plan_sample_size(0.01, 0.01).M_rounded == 23000
    assert dl.required_N(0.5447, 0.01, 0.6) == 8
    assert dl.dkw_epsilon(4000, 0.05) == pytest.approx(0.019351137801)


def test_model_free_rollouts():
    prob = dl.scalar_integrator_problem(0.6)
    K = dl.solve_discounted_riccati(prob).K
    cfg = dl.RolloutConfig(100, 3000, np.ones(1), 13)
    dist = dl.evaluate_model_free(prob, K, dl.scalar_normal_noise(), cfg, threads=2)
    loop = dl.make_closed_loop(prob, K)
    target = dl.analytic_mean(loop, np.ones(1), 0.6, dl.scalar_normal_noise())
    se = math.sqrt(dist.variance() / len(dist))
    assert abs(dist.mean() - target) < 4 * se


def test_sensitivity_pipeline():
    prob = dl.datacenter_problem(0.6)
    K = dl.solve_discounted_riccati(prob).K
    loop = dl.make_closed_loop(prob, K)
    pert = dl.Perturbation.relative(prob, K, 0.1, 0.1)
    tilt = dl.perturbed_closed_loop(prob, K, pert, 0.6)
    lemma = dl.lyapunov_sensitivity_bound(loop, pert, 0.6)
    assert lemma.applicable
    assert np.linalg.norm(loop.P - tilt.P) <= lemma.bound_F
    pair = dl.sample_perturbed_pair(
        loop, tilt, dl.NoiseModel.standard_normal(3), np.ones(3), 0.6, 20, 4000, 3
    )
    measured = dl.measure_sup_difference(pair.original, pair.perturbed)
    rep = dl.sensitivity_constants(loop, tilt, pert, np.ones(3), 0.6, 3.0, 0.14)
    assert rep.applicable
    assert measured <= rep.theorem_bound


def test_lqg_identity_and_union():
    prob = dl.datacenter_observer_problem(0.6)
    K = dl.solve_discounted_riccati(dl.datacenter_problem(0.6)).K
    L = dl.datacenter_observer_gain()
    aug = dl.build_augmented(prob, K, L)
    assert aug.rho_bar > 1.0  # published observer gain: wide but stable loop
    whole = np.sort_complex(np.linalg.eigvals(aug.A_bar))
    blocks = np.sort_complex(
        np.concatenate(
            [np.linalg.eigvals(aug.A_bar[:3, :3]), np.linalg.eigvals(aug.A_bar[3:, 3:])]
        )
    )
    assert np.abs(whole - blocks).max() < 1e-8
    cost, aug_cost = dl.observer_rollout_cost(
        prob, K, L, np.ones(3), np.zeros(3), 120, dl.Rng(4)
    )
    assert abs(cost - aug_cost) < 1e-9 * max(1.0, abs(cost))


def test_errors_are_typed():
    with pytest.raises(dl.DlqrError):
        dl.solve_discounted_lyapunov(np.array([[1.2]]), np.array([[1.0]]), 0.9)
    with pytest.raises(dl.DlqrError):
        dl.dkw_epsilon(0, 0.5)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from mpsplit.bema import (
    BemaConfig,
    bema_fit,
    bulk_window,
    goodness_of_fit,
    spike_count,
    tw_edge_scale,
)
from mpsplit.errors import DegenerateSpectrumError
from mpsplit.mp import mp_edges, mp_quantile, tw1_quantile
from mpsplit.spectral import Esd, symmetrized_spectrum


def gaussian_esd(n, seed, m=None):
    return symmetrized_spectrum(np.random.default_rng(seed).standard_normal((n, m or n)))


def rank_one_matrix(n, theta, seed):
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((n, n))
    u, v = rng.standard_normal(n), rng.standard_normal(n)
    return r, theta * np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))


@pytest.mark.parametrize("alpha, beta", [(0, 0.5), (0.5, 0.5), (0.25, 0), (0.25, 1), (-1, 0.5)])
def test_config_domain(alpha, beta):
    with pytest.raises(ValueError):
        BemaConfig(alpha, beta)


def test_bulk_window():
    assert bulk_window(1000, 0.25) == (250, 750)
    assert bulk_window(10, 0.25) == (3, 7)
    assert bulk_window(784, 0.25) == (196, 588)


def test_square_edge_scale_matches_literal_form():
    for n in (10, 500, 1000, 1500):
        assert tw_edge_scale(n, n) == pytest.approx(2 ** (4 / 3) * n ** (-2 / 3), rel=1e-14)


def test_pure_noise_recovers_unit_variance():
    esd = gaussian_esd(1000, 3)
    res = bema_fit(esd, BemaConfig(0.25, 0.5))
    assert res.sigma_hat_sq == pytest.approx(1.0, abs=0.05)
    assert res.lambda_plus == pytest.approx(4.0, abs=0.4)
    assert res.m == 1000


def test_constant_spectrum_closed_form():
    m, t = 200, 3.5
    esd = Esd(np.full(m, t), m, 1.0)
    cfg = BemaConfig(0.25, 0.5)
    lo, hi = bulk_window(m, cfg.alpha)
    q = mp_quantile(np.arange(lo, hi + 1) / m, mp_edges(1, 1))
    assert bema_fit(esd, cfg).sigma_hat_sq == pytest.approx(t * q.sum() / (q @ q), rel=1e-12)


def test_rank_one_perturbation_keeps_edge_and_adds_one_spike():
    r, s = rank_one_matrix(500, 50.0, seed=11)
    base = bema_fit(symmetrized_spectrum(r))
    esd = symmetrized_spectrum(r + s)
    res = bema_fit(esd)
    assert res.lambda_plus == pytest.approx(base.lambda_plus, rel=0.15)
    assert spike_count(esd, res) == 1
    # brute force: exactly one eigenvalue of the perturbed matrix clears the pure-noise edge
    assert np.count_nonzero(esd.eigenvalues > base.lambda_plus) == 1


def test_spike_free_noise_at_high_confidence():
    zero = 0
    seeds = range(100)
    for seed in seeds:
        esd = gaussian_esd(500, 1000 + seed)
        zero += spike_count(esd, bema_fit(esd, BemaConfig(0.25, 0.9))) == 0
    assert zero / len(seeds) >= 0.8


def test_zero_spectrum():
    esd = Esd(np.zeros(50), 50, 1.0)
    with pytest.raises(DegenerateSpectrumError):
        bema_fit(esd)


def test_spike_count_zero_esd():
    esd = Esd(np.zeros(50), 50, 1.0)
    res = bema_fit(Esd(np.linspace(0.1, 3, 50), 50, 1.0))
    assert spike_count(esd, res) == 0


def test_too_few_eigenvalues():
    with pytest.raises(ValueError):
        bema_fit(Esd(np.linspace(1, 2, 9), 9, 1.0))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 20))
def test_scale_equivariance(t):
    esd = gaussian_esd(120, 5, 80)
    scaled = Esd(t * t * esd.eigenvalues, esd.n_normalizer, esd.aspect_c)
    a, b = bema_fit(esd), bema_fit(scaled)
    assert b.sigma_hat_sq == pytest.approx(t * t * a.sigma_hat_sq, rel=1e-12)
    assert b.lambda_plus == pytest.approx(t * t * a.lambda_plus, rel=1e-12)
    assert spike_count(scaled, b) == spike_count(esd, a)


def test_edge_monotone_in_beta():
    esd = gaussian_esd(300, 9)
    betas = np.linspace(0.05, 0.95, 19)
    edges = [bema_fit(esd, BemaConfig(0.25, b)).lambda_plus for b in betas]
    spikes = [spike_count(esd, bema_fit(esd, BemaConfig(0.25, b))) for b in betas]
    assert np.all(np.diff(edges) > 0)
    assert np.all(np.diff(spikes) <= 0)


@pytest.mark.parametrize("beta", [0.1, 0.5, 0.9])
def test_square_case_literal_formula(beta):
    n = 400
    esd = gaussian_esd(n, 21)
    res = bema_fit(esd, BemaConfig(0.25, beta))
    literal = res.sigma_hat_sq * (4 + 2 ** (4 / 3) * float(tw1_quantile(beta)) * n ** (-2 / 3))
    assert res.lambda_plus == pytest.approx(literal, rel=1e-12)


def test_rectangular_uses_aspect_ratio():
    esd = gaussian_esd(1000, 4, 500)
    res = bema_fit(esd)
    assert esd.aspect_c == 0.5
    assert res.sigma_hat_sq == pytest.approx(1.0, abs=0.05)
    assert res.lambda_plus == pytest.approx((1 + math.sqrt(0.5)) ** 2, rel=0.05)


def test_fit_on_exact_quantile_grid():
    m = 400
    ev = mp_quantile(np.arange(1, m + 1) / m, mp_edges(1, 1))
    esd = Esd(ev, m, 1.0)
    rep = goodness_of_fit(esd, bema_fit(esd), 0.01)
    assert rep.passed
    assert rep.s_statistic < 1 / m + 1e-6
    assert 0 <= rep.i_low < rep.i_high <= m


def test_fit_gaussian_passes():
    esd = gaussian_esd(1000, 17)
    assert goodness_of_fit(esd, bema_fit(esd), 0.05).s_statistic < 0.05


def test_fit_uniform_rejected():
    ev = np.sort(np.random.default_rng(2).uniform(0, 8, 1000))
    esd = Esd(ev, 1000, 1.0)
    rep = goodness_of_fit(esd, bema_fit(esd), 0.1)
    assert rep.s_statistic > 0.1 and not rep.passed


def test_fit_monotone_in_gamma():
    esd = gaussian_esd(200, 8)
    res = bema_fit(esd)
    s = goodness_of_fit(esd, res, 0.5).s_statistic
    gammas = np.linspace(0, 1, 41)
    passed = [goodness_of_fit(esd, res, g).passed for g in gammas]
    assert passed == sorted(passed)
    assert all(p == (g >= s) for p, g in zip(passed, gammas))
    assert 0 <= s <= 1

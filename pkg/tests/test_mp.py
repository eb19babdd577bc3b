import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from scipy import integrate

from mpsplit.mp import (
    TW1,
    TWQuantileTable,
    mp_cdf,
    mp_edges,
    mp_pdf,
    mp_quantile,
    tw1_quantile,
)

SIGMAS = (0.5, 1.0, 4.0)
RATIOS = (0.1, 0.5, 1.0)


def cdf_oracle(x, sigma_sq, c):
    """Integrate the density after t = lo + (hi - lo) sin^2(theta), which removes both edge singularities."""
    mpmath.mp.dps = 30
    lo = mpmath.mpf(sigma_sq) * (1 - mpmath.sqrt(c)) ** 2
    hi = mpmath.mpf(sigma_sq) * (1 + mpmath.sqrt(c)) ** 2
    if x <= lo:
        return 0.0
    if x >= hi:
        return 1.0

    def integrand(th):
        t = lo + (hi - lo) * mpmath.sin(th) ** 2
        dens = mpmath.sqrt((hi - t) * (t - lo)) / (2 * mpmath.pi * sigma_sq * c * t)
        return dens * 2 * (hi - lo) * mpmath.sin(th) * mpmath.cos(th)

    theta = mpmath.asin(mpmath.sqrt((x - lo) / (hi - lo)))
    return float(mpmath.quad(integrand, [0, theta]))


@pytest.mark.parametrize(
    "sigma_sq, c, lo, hi",
    [(1, 1, 0.0, 4.0), (2, 1, 0.0, 8.0), (1, 0.25, 0.25, 2.25)],
)
def test_edges(sigma_sq, c, lo, hi):
    p = mp_edges(sigma_sq, c)
    assert p.lambda_minus == pytest.approx(lo, abs=1e-15)
    assert p.lambda_plus == pytest.approx(hi, abs=1e-15)


@pytest.mark.parametrize("sigma_sq, c", [(0, 1), (-1, 0.5), (1, 0), (1, 1.5), (1, -0.2)])
def test_edges_domain(sigma_sq, c):
    with pytest.raises(ValueError):
        mp_edges(sigma_sq, c)


@given(st.floats(0.01, 100), st.floats(0.01, 1.0), st.floats(0.1, 10))
def test_edges_scale_linearly(sigma_sq, c, t):
    a, b = mp_edges(sigma_sq, c), mp_edges(t * sigma_sq, c)
    assert_allclose([b.lambda_minus, b.lambda_plus], [t * a.lambda_minus, t * a.lambda_plus], rtol=1e-14)


def test_pdf_examples():
    p = mp_edges(1, 1)
    assert mp_pdf(5, p) == 0
    # sqrt((4 - 2) * 2) / (2 * pi * 2) = 1 / (2 pi)
    assert mp_pdf(2, p) == pytest.approx(1 / (2 * np.pi), rel=1e-14)
    q = mp_edges(1, 0.25)
    assert mp_pdf(q.lambda_minus, q) == 0
    assert mp_pdf(-1.0, q) == 0


@pytest.mark.parametrize("sigma_sq", SIGMAS)
@pytest.mark.parametrize("c", RATIOS)
def test_pdf_integrates_to_one(sigma_sq, c):
    p = mp_edges(sigma_sq, c)
    f = lambda t: float(mp_pdf(t, p))
    if p.lambda_minus == 0:
        # inverse-sqrt singularity at 0: split so QUADPACK sees it at an endpoint
        total = sum(integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
                    for a, b in [(0, 1e-6 * p.lambda_plus), (1e-6 * p.lambda_plus, p.lambda_plus)])
    else:
        total = integrate.quad(f, p.lambda_minus, p.lambda_plus, limit=400, epsabs=1e-13, epsrel=1e-13)[0]
    assert total == pytest.approx(1.0, abs=1e-8)


def test_cdf_examples():
    p = mp_edges(1, 1)
    assert mp_cdf(4, p) == 1
    assert mp_cdf(0, p) == 0
    assert mp_cdf(2, p) == pytest.approx(0.5 + 1 / np.pi, abs=1e-12)


@pytest.mark.parametrize("sigma_sq", SIGMAS)
@pytest.mark.parametrize("c", RATIOS + (0.784,))
def test_cdf_matches_quadrature_oracle(sigma_sq, c):
    p = mp_edges(sigma_sq, c)
    xs = np.linspace(p.lambda_minus, p.lambda_plus, 13)[1:-1]
    expected = [cdf_oracle(x, sigma_sq, c) for x in xs]
    assert_allclose(mp_cdf(xs, p), expected, atol=1e-10, rtol=0)


@pytest.mark.parametrize("c", RATIOS)
def test_cdf_closed_agrees_with_builtin_quadrature(c):
    p = mp_edges(1.3, c)
    xs = np.linspace(p.lambda_minus - 0.1, p.lambda_plus + 0.1, 101)
    assert_allclose(mp_cdf(xs, p), mp_cdf(xs, p, method="quad"), atol=1e-9, rtol=0)


@pytest.mark.parametrize("c", RATIOS)
def test_cdf_monotone_and_total_mass(c):
    p = mp_edges(2.0, c)
    xs = np.linspace(p.lambda_minus - 1, p.lambda_plus + 1, 10_000)
    vals = mp_cdf(xs, p)
    assert np.all(np.diff(vals) >= 0)
    assert mp_cdf(p.lambda_plus, p) - mp_cdf(p.lambda_minus, p) == pytest.approx(1.0, abs=1e-8)


def test_quantile_examples():
    p = mp_edges(1, 1)
    assert mp_quantile(0, p) == 0
    assert mp_quantile(1, p) == 4
    assert mp_quantile(0.8183, p) == pytest.approx(2.0, abs=1e-3)
    assert mp_quantile(0.5 + 1 / np.pi, p) == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("p_bad", [-0.01, 1.01, np.nan])
def test_quantile_domain(p_bad):
    with pytest.raises(ValueError):
        mp_quantile(p_bad, mp_edges(1, 1))


@pytest.mark.parametrize("c", RATIOS)
def test_quantile_inverts_cdf(c):
    p = mp_edges(0.7, c)
    eps = 1e-3 * (p.lambda_plus - p.lambda_minus)
    xs = np.linspace(p.lambda_minus + eps, p.lambda_plus - eps, 200)
    assert_allclose(mp_quantile(mp_cdf(xs, p), p), xs, atol=1e-6)
    probs = np.linspace(0, 1, 101)
    assert_allclose(mp_cdf(mp_quantile(probs, p), p), probs, atol=1e-9)


@settings(max_examples=50)
@given(st.floats(0.05, 1.0), st.floats(0.0, 1.0))
def test_quantile_roundtrip_property(c, prob):
    p = mp_edges(1.0, c)
    assert mp_cdf(mp_quantile(prob, p), p) == pytest.approx(prob, abs=1e-9)


# Published TW1 values (Tracy & Widom tabulations; also Bejan 2005), 3-4 decimals.
@pytest.mark.parametrize("prob, expected", [(0.50, -1.2685), (0.95, 0.9793), (0.99, 2.0234), (0.90, 0.4501),
                                            (0.05, -3.1806), (0.01, -3.8954)])
def test_tw1_quantile_published_values(prob, expected):
    assert tw1_quantile(prob) == pytest.approx(expected, abs=2e-3)


def test_tw1_table_shape_and_monotone():
    assert len(TW1.probs) >= 50
    lo, hi = TW1.span
    assert lo <= 0.005 and hi >= 0.995
    grid = np.linspace(lo, hi, 5000)
    assert np.all(np.diff(tw1_quantile(grid)) > 0)


@pytest.mark.parametrize("prob", [0.001, 0.999, 0.0, 1.0])
def test_tw1_outside_span(prob):
    with pytest.raises(ValueError):
        tw1_quantile(prob)


def test_tw_table_rejects_nonmonotone():
    with pytest.raises(ValueError):
        TWQuantileTable([(0.1, 1.0), (0.2, 0.5), (0.3, 2.0)])

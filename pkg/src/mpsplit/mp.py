"""Marchenko-Pastur law and Tracy-Widom (beta=1) quantiles.

All functions accept scalars or numpy arrays for the evaluation point and
return the same shape.
"""

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator

from ._tw_table import TW1_TABLE


@dataclass(frozen=True)
class MPParams:
    """Parameters of a Marchenko-Pastur law with its support edges."""

    sigma_sq: float
    c: float
    lambda_minus: float
    lambda_plus: float


def mp_edges(sigma_sq, c):
    """Return :class:`MPParams` for variance ``sigma_sq`` and ratio ``c`` in (0, 1]."""
    sigma_sq = float(sigma_sq)
    c = float(c)
    if not sigma_sq > 0 or not np.isfinite(sigma_sq):
        raise ValueError(f"sigma_sq must be positive, got {sigma_sq}")
    if not 0 < c <= 1:
        raise ValueError(f"aspect ratio c must lie in (0, 1], got {c}")
    root = np.sqrt(c)
    return MPParams(
        sigma_sq=sigma_sq,
        c=c,
        lambda_minus=sigma_sq * (1.0 - root) ** 2,
        lambda_plus=sigma_sq * (1.0 + root) ** 2,
    )


def mp_pdf(x, params):
    """Marchenko-Pastur density; zero outside ``[lambda_minus, lambda_plus]``."""
    x = np.asarray(x, dtype=float)
    lo, hi = params.lambda_minus, params.lambda_plus
    inside = (x > lo) & (x < hi) & (x > 0)
    xs = np.where(inside, x, 1.0)
    val = np.sqrt(np.clip((hi - xs) * (xs - lo), 0.0, None)) / (
        2.0 * np.pi * params.sigma_sq * params.c * xs
    )
    out = np.where(inside, val, 0.0)
    return out[()] if out.ndim == 0 else out


def _antiderivative(y, a, b):
    # integral of sqrt((b - y)(y - a)) / y on the unit-variance scale;
    # arcsin written as atan2 so it stays well conditioned at the edges
    mid = 0.5 * (a + b)
    r = np.sqrt(np.clip((b - y) * (y - a), 0.0, None))
    g = r + mid * np.arctan2(y - mid, r)
    if a > 0:
        root_ab = np.sqrt(a * b)
        g = g - root_ab * np.arctan2((a + b) * y - 2.0 * a * b, 2.0 * root_ab * r)
    return g


def _cdf_closed(x, params):
    y = x / params.sigma_sq
    c = params.c
    if c == 1.0:
        a, b = 0.0, 4.0
    else:
        a = (1.0 - np.sqrt(c)) ** 2
        b = (1.0 + np.sqrt(c)) ** 2
    ys = np.clip(y, max(a, 1e-300), b)
    g_low = 0.5 * np.pi * (np.sqrt(a * b) - 0.5 * (a + b))
    val = (_antiderivative(ys, a, b) - g_low) / (2.0 * np.pi * c)
    val = np.clip(val, 0.0, 1.0)
    val = np.where(y <= a, 0.0, val)
    return np.where(y >= b, 1.0, val)


def _cdf_quad(x, params):
    lo, hi = params.lambda_minus, params.lambda_plus
    out = np.empty(x.shape)
    for idx, xv in np.ndenumerate(x):
        if xv <= lo:
            out[idx] = 0.0
        elif xv >= hi:
            out[idx] = 1.0
        else:
            out[idx] = min(max(_quad_segment(lo, xv, params), 0.0), 1.0)
    return out


def _quad_segment(lo, upper, params):
    hi = params.lambda_plus
    scale = 1.0 / (2.0 * np.pi * params.sigma_sq * params.c)
    if lo == 0:
        # density ~ sqrt(hi - t) * t^(-1/2)
        val, _ = integrate.quad(
            lambda t: scale * np.sqrt(max(hi - t, 0.0)),
            0.0, upper, weight="alg", wvar=(-0.5, 0.0),
            epsabs=1e-13, epsrel=1e-12, limit=200,
        )
    else:
        val, _ = integrate.quad(
            lambda t: scale * np.sqrt(max(hi - t, 0.0)) / t,
            lo, upper, weight="alg", wvar=(0.5, 0.0),
            epsabs=1e-13, epsrel=1e-12, limit=200,
        )
    return val


def mp_cdf(x, params, method="closed"):
    """Marchenko-Pastur CDF.

    ``method="closed"`` evaluates the antiderivative in closed form;
    ``method="quad"`` integrates :func:`mp_pdf` adaptively and is kept as a
    slower cross-check.
    """
    x = np.asarray(x, dtype=float)
    if method == "closed":
        out = _cdf_closed(x, params)
    elif method == "quad":
        out = _cdf_quad(np.atleast_1d(x), params).reshape(x.shape)
    else:
        raise ValueError(f"unknown method {method!r}")
    out = np.asarray(out, dtype=float)
    return out[()] if out.ndim == 0 else out


def mp_quantile(p, params, xtol=1e-12, ptol=1e-12, max_iter=200):
    """Lower-tail quantile: ``q`` with ``mp_cdf(q) == p``, by vectorised bisection.

    Iterates until the bracket is narrower than ``xtol`` in x and ``ptol`` in
    probability; the second condition matters near a zero lower edge, where
    the CDF grows like ``sqrt(x)``.
    """
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)) or np.any(~np.isfinite(p)):
        raise ValueError("probabilities must lie in [0, 1]")
    lo = np.full(p.shape, params.lambda_minus)
    hi = np.full(p.shape, params.lambda_plus)
    f_lo = np.zeros(p.shape)
    f_hi = np.ones(p.shape)
    for _ in range(max_iter):
        if np.all((hi - lo <= xtol) & (f_hi - f_lo <= ptol)):
            break
        mid = 0.5 * (lo + hi)
        f_mid = _cdf_closed(mid, params)
        below = f_mid < p
        lo = np.where(below, mid, lo)
        f_lo = np.where(below, f_mid, f_lo)
        hi = np.where(below, hi, mid)
        f_hi = np.where(below, f_hi, f_mid)
    q = 0.5 * (lo + hi)
    q = np.where(p == 0, params.lambda_minus, q)
    q = np.where(p == 1, params.lambda_plus, q)
    return q[()] if q.ndim == 0 else q


class TWQuantileTable:
    """Monotone cubic interpolant over (probability, quantile) knots."""

    def __init__(self, pairs=TW1_TABLE):
        probs, quants = np.array(pairs, dtype=float).T
        if np.any(np.diff(probs) <= 0) or np.any(np.diff(quants) <= 0):
            raise ValueError("table must be strictly increasing in both columns")
        self.probs = probs
        self.quantiles = quants
        self._interp = PchipInterpolator(probs, quants, extrapolate=False)

    @property
    def span(self):
        return float(self.probs[0]), float(self.probs[-1])

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        lo, hi = self.span
        if np.any((p < lo) | (p > hi)):
            raise ValueError(f"probability outside table span [{lo}, {hi}]")
        out = self._interp(p)
        return out[()] if out.ndim == 0 else out


TW1 = TWQuantileTable()


def tw1_quantile(p, table=TW1):
    """Tracy-Widom (beta=1) quantile at probability ``p``."""
    return table(p)

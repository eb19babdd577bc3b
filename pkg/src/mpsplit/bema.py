"""Bulk-edge estimation (BEMA), spike counting and the bulk CDF fit test."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateSpectrumError
from .mp import mp_cdf, mp_edges, mp_quantile, tw1_quantile


@dataclass(frozen=True)
class BemaConfig:
    alpha: float = 0.25
    beta: float = 0.5

    def __post_init__(self):
        if not 0 < self.alpha < 0.5:
            raise ValueError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")


@dataclass(frozen=True)
class BemaResult:
    sigma_hat_sq: float
    lambda_plus: float
    config: BemaConfig
    m: int


@dataclass(frozen=True)
class FitReport:
    s_statistic: float
    gamma: float
    i_low: int
    i_high: int
    passed: bool


def bulk_window(m, alpha):
    """Inclusive 1-based index range ``ceil(alpha m) .. floor((1 - alpha) m)``."""
    # small epsilon keeps e.g. 0.25 * 1000 from landing on 250.00000000000003
    lo = max(1, math.ceil(alpha * m - 1e-9))
    hi = min(m, math.floor((1 - alpha) * m + 1e-9))
    if lo > hi:
        raise ValueError(f"empty bulk window for m={m}, alpha={alpha}")
    return lo, hi


@lru_cache(maxsize=64)
def _bulk_quantiles(m, c, alpha):
    lo, hi = bulk_window(m, alpha)
    k = np.arange(lo, hi + 1)
    q = mp_quantile(k / m, mp_edges(1.0, c))
    q.setflags(write=False)
    return k, q


def tw_edge_scale(n, m):
    """Tracy-Widom fluctuation scale of the top eigenvalue of ``(1/N) W^T W``."""
    rn, rm = math.sqrt(n), math.sqrt(m)
    return (rn + rm) * (1.0 / rn + 1.0 / rm) ** (1.0 / 3.0) / n


def bema_fit(esd, config=BemaConfig()):
    """Fit the MP bulk by least squares on quantiles; return ``sigma_hat_sq`` and the edge.

    The confidence ``beta`` enters through the Tracy-Widom quantile at
    probability ``beta``, so a larger ``beta`` gives a larger edge.
    """
    m = esd.m
    if m < 10:
        raise ValueError(f"need at least 10 eigenvalues, got {m}")
    k, q = _bulk_quantiles(m, float(esd.aspect_c), float(config.alpha))
    lam = esd.eigenvalues[k - 1]
    denom = float(np.dot(q, q))
    num = float(np.dot(q, lam))
    if not num > 0 or denom == 0:
        raise DegenerateSpectrumError("bulk eigenvalues are all zero; variance undefined")
    sigma_hat_sq = num / denom
    c = esd.aspect_c
    n = esd.n_normalizer
    t = float(tw1_quantile(config.beta))
    edge = (1.0 + math.sqrt(c)) ** 2 + t * tw_edge_scale(n, m)
    lambda_plus = sigma_hat_sq * edge
    if not lambda_plus > 0:
        raise DegenerateSpectrumError(f"non-positive edge estimate {lambda_plus}")
    return BemaResult(sigma_hat_sq=sigma_hat_sq, lambda_plus=lambda_plus, config=config, m=m)


def spike_count(esd, result):
    return int(np.count_nonzero(esd.eigenvalues > result.lambda_plus))


def goodness_of_fit(esd, result, gamma):
    """Max gap between ``i/m`` and the fitted MP CDF at the ``i``-th eigenvalue over the bulk."""
    if not 0 <= gamma <= 1:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    m = esd.m
    i_low, i_high = bulk_window(m, result.config.alpha)
    i = np.arange(i_low, i_high + 1)
    theo = mp_cdf(esd.eigenvalues[i - 1], mp_edges(result.sigma_hat_sq, esd.aspect_c))
    s = float(np.max(np.abs(i / m - theo)))
    return FitReport(s_statistic=s, gamma=gamma, i_low=i_low, i_high=i_high, passed=s <= gamma)

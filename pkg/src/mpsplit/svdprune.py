"""Low-rank layer splitting driven by the MP edge.

A weight matrix ``W`` (out x in) is replaced by ``w_second @ w_first`` where
``w_first = sqrt(S_r) V_r^T`` and ``w_second = U_r sqrt(S_r)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bema import FitReport
from .errors import NumericalError
from .spectral import as_weight_matrix


@dataclass(frozen=True)
class SvdFactors:
    u: np.ndarray
    singular_values: np.ndarray
    v_t: np.ndarray

    def reconstruct(self):
        k = len(self.singular_values)
        return (self.u[:, :k] * self.singular_values) @ self.v_t[:k]


@dataclass(frozen=True)
class SplitDecision:
    rank_kept: int
    n_small: int
    n_spikes: int
    removal_fraction: float
    params_before: int
    params_after: int
    fit: FitReport
    accepted: bool

    @property
    def n_dropped(self):
        return self.n_small + self.n_spikes - self.rank_kept


@dataclass(frozen=True)
class SplitResult:
    w_first: np.ndarray
    w_second: np.ndarray
    bias: np.ndarray

    @property
    def rank(self):
        return self.w_first.shape[0]


def decompose(w, full_matrices=True):
    w = as_weight_matrix(w)
    try:
        u, s, vt = np.linalg.svd(w, full_matrices=full_matrices)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed on {w.shape[0]}x{w.shape[1]} matrix: {exc}") from exc
    return SvdFactors(u=u, singular_values=s, v_t=vt)


def split_param_count(out_dim, in_dim, rank):
    """Weights of both factors plus the (single) bias vector."""
    return rank * in_dim + out_dim * rank + out_dim


def plan_split(w, esd, bema, fit, removal_fraction):
    if not 0 <= removal_fraction < 1:
        raise ValueError(f"removal_fraction must lie in [0, 1), got {removal_fraction}")
    out_dim, in_dim = np.shape(w)
    m = esd.m
    n_small = int(np.count_nonzero(esd.eigenvalues <= bema.lambda_plus))
    n_spikes = m - n_small
    dropped = math.floor(removal_fraction * n_small)
    rank = m - dropped
    before = out_dim * in_dim + out_dim
    after = split_param_count(out_dim, in_dim, rank)
    accepted = bool(fit.passed and rank > 0 and after < before)
    return SplitDecision(
        rank_kept=rank,
        n_small=n_small,
        n_spikes=n_spikes,
        removal_fraction=removal_fraction,
        params_before=before,
        params_after=after,
        fit=fit,
        accepted=accepted,
    )


def truncate(w, rank, factors=None):
    """Rank-``rank`` factors ``(w_first, w_second)`` of ``w``; no acceptance gate."""
    w = as_weight_matrix(w)
    if not 0 < rank <= min(w.shape):
        raise ValueError(f"rank must lie in [1, {min(w.shape)}], got {rank}")
    f = factors if factors is not None else decompose(w, full_matrices=False)
    root = np.sqrt(f.singular_values[:rank])
    w_first = root[:, None] * f.v_t[:rank]
    w_second = f.u[:, :rank] * root
    return w_first, w_second


def split(w, bias, decision, factors=None):
    if not decision.accepted:
        raise ValueError("split requires an accepted decision")
    w_first, w_second = truncate(w, decision.rank_kept, factors)
    bias = None if bias is None else np.array(bias, dtype=np.float64)
    return SplitResult(w_first=w_first, w_second=w_second, bias=bias)

"""Symmetrized spectra of weight matrices and their empirical CDFs."""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

NEG_TOL = 1e-10


@dataclass(frozen=True)
class Esd:
    """Ascending eigenvalues of ``(1/N) W^T W`` formed on the smaller side.

    ``n_normalizer`` is ``N = max(rows, cols)`` and ``aspect_c = M / N``.
    """

    eigenvalues: np.ndarray
    n_normalizer: int
    aspect_c: float

    @property
    def m(self):
        return len(self.eigenvalues)


def as_weight_matrix(w):
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 2 or w.size == 0:
        raise ValueError(f"expected a nonempty 2-D matrix, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weight matrix has non-finite entries")
    return w


def symmetrized_spectrum(w):
    w = as_weight_matrix(w)
    rows, cols = w.shape
    n, m = max(rows, cols), min(rows, cols)
    gram = w.T @ w if rows >= cols else w @ w.T
    try:
        eig = np.linalg.eigvalsh(gram / n)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on {rows}x{cols} matrix: {exc}") from exc
    # PSD by construction; anything clearly negative means the solver misbehaved
    scale = max(1.0, float(eig[-1]))
    if eig[0] < -NEG_TOL * scale:
        raise NumericalError(f"Gram matrix has negative eigenvalue {eig[0]:.3e}")
    eig = np.clip(eig, 0.0, None)
    return Esd(eigenvalues=eig, n_normalizer=n, aspect_c=m / n)


def empirical_cdf(esd, a):
    """Fraction of eigenvalues ``<= a``; vectorised over ``a``."""
    counts = np.searchsorted(esd.eigenvalues, a, side="right")
    return counts / esd.m

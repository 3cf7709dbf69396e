"""Symmetric tridiagonal matrices and a Sturm-sequence top-eigenvalue solver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# pivot nudge for an exactly-singular Sturm shift
_TINY = 1e-300


@dataclass
class TridiagMatrix:
    """Symmetric tridiagonal matrix (diag, one shared off-diagonal)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        if self.diag.ndim != 1 or self.offdiag.ndim != 1:
            raise ValueError("diag and offdiag must be vectors")
        if len(self.diag) < 1:
            raise ValueError("matrix must be at least 1x1")
        if len(self.offdiag) != len(self.diag) - 1:
            raise ValueError("offdiag must be one shorter than diag")
        if not (np.isfinite(self.diag).all() and np.isfinite(self.offdiag).all()):
            raise ValueError("entries must be finite")

    @property
    def size(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        idx = np.arange(self.size - 1)
        m[idx, idx + 1] = self.offdiag
        m[idx + 1, idx] = self.offdiag
        return m


def gershgorin_interval(m: TridiagMatrix) -> tuple[float, float]:
    """Interval certain to contain every eigenvalue."""
    radius = np.zeros(m.size)
    if m.size > 1:
        radius[:-1] += np.abs(m.offdiag)
        radius[1:] += np.abs(m.offdiag)
    return float(np.min(m.diag - radius)), float(np.max(m.diag + radius))


def _count_below(diag: np.ndarray, off: np.ndarray, x: float) -> int:
    # Sturm sequence: number of eigenvalues strictly below x
    count = 0
    q = diag[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, len(diag)):
        if q == 0.0:
            q = _TINY
        q = diag[i] - x - off[i - 1] * off[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def tridiag_top_eigenvalue(m: TridiagMatrix, tol: float = 1e-12) -> float:
    """Largest eigenvalue by bisection on the Sturm count.

    Absolute error at most tol; at most 200 bisection steps inside the
    Gershgorin interval.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    lo, hi = gershgorin_interval(m)
    if lo == hi:
        return lo
    n = m.size
    diag, off = m.diag, m.offdiag
    # invariant: largest eigenvalue in (lo, hi]
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if _count_below(diag, off, mid) == n:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)

"""Eigenvalues kappa_{n,l} of the correlation operator K (three particles).

The single source of truth is the ratio formula

    kappa_{n,l} = [P_n^{(1/2, l+1/2)}(-1/2) / P_n^{(1/2, l+1/2)}(1)] * (-1/2)^l,

computed by a coupled normalized recurrence directly on the kappa values
(the 1/P_n(1) normalization and the prefactor are folded into the
three-term recurrence, so every intermediate stays in [-1, 1] and cannot
overflow).  All other printed formulas for these eigenvalues are audited
against this oracle by audit_identities, never trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .jacobi import JacobiParams, recurrence_abc

_SQRT_8E3 = math.sqrt(8.0 * math.e / 3.0)

# diffs at or below this magnitude count as ties in the monotonicity
# check; genuine diffs in the audited windows are >= 5e-7
_MONO_DEADBAND = 1e-14

DEFAULT_CELL_BUDGET = 10_000_000


def kappa_column(ell: int, n_max: int) -> np.ndarray:
    """kappa_{n,ell} for n = 0..n_max as a float64 vector."""
    if ell < 0 or n_max < 0:
        raise ValueError("indices must be nonnegative")
    a, b = 0.5, ell + 0.5
    x = -0.5
    params = JacobiParams.for_sector(ell)
    out = np.empty(n_max + 1)
    out[0] = (-0.5) ** ell
    if n_max == 0:
        return out
    # P_1(x)/P_1(1) from the closed form for P_1
    out[1] = (((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0) / (a + 1.0)) * out[0]
    km1, k = out[0], out[1]
    for n in range(1, n_max):
        A, B, C = recurrence_abc(params, n)
        knew = ((A * x + B) * k - C * km1 * (n / (a + n))) * ((n + 1.0) / (a + n + 1.0))
        km1, k = k, knew
        out[n + 1] = knew
    return out


def kappa(n: int, ell: int) -> float:
    """Single eigenvalue via the ratio recurrence."""
    return float(kappa_column(ell, n)[n])


def kappa_fraction(n: int, ell: int) -> Fraction:
    """kappa_{n,ell} in exact rational arithmetic (slow; cross-checks)."""
    if ell < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    a = Fraction(1, 2)
    b = Fraction(2 * ell + 1, 2)
    x = Fraction(-1, 2)
    k0 = Fraction(-1, 2) ** ell
    if n == 0:
        return k0
    k1 = (((a + 1) + (a + b + 2) * (x - 1) / 2) / (a + 1)) * k0
    km1, k = k0, k1
    for m in range(1, n):
        s = 2 * m + a + b
        d = 2 * (m + 1) * (m + a + b + 1)
        A = (s + 1) * (s + 2) / d
        B = (a * a - b * b) * (s + 1) / (d * s)
        C = 2 * (m + a) * (m + b) * (s + 2) / (d * s)
        knew = ((A * x + B) * k - C * km1 * Fraction(m) / (a + m)) * (m + 1) / (a + m + 1)
        km1, k = k, knew
    return k


def kappa0_fraction(k: int) -> Fraction:
    """kappa_{k,0} exactly: the period-3 pattern 1, -1, 0 over (k+1)."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    return Fraction((1, -1, 0)[k % 3], k + 1)


def kappa_hat(n: int, ell: int) -> float:
    """Monotone upper bound: hat^2 = (8e/3) (n+1)^{-1/2} (n+l+3/2)^{-1/2}."""
    return _SQRT_8E3 * ((n + 1.0) * (n + ell + 1.5)) ** -0.25


def kappa_tilde(n: int, ell: int) -> float:
    """Simpler bound sqrt(8e/3) (n + sqrt(l))^{-1/2}; valid for l >= 4."""
    s = n + math.sqrt(ell)
    if s == 0.0:
        return math.inf
    return _SQRT_8E3 / math.sqrt(s)


@dataclass(frozen=True)
class KappaTable:
    """Dense (ell, n) grids of kappa and its two upper bounds."""

    n_max: int
    ell_max: int
    values: np.ndarray
    hat: np.ndarray
    tilde: np.ndarray


def kappa_table(n_max: int, ell_max: int, cell_budget: int = DEFAULT_CELL_BUDGET) -> KappaTable:
    if n_max < 0 or ell_max < 0:
        raise ValueError("indices must be nonnegative")
    cells = (n_max + 1) * (ell_max + 1)
    if cells > cell_budget:
        raise ValueError(f"grid of {cells} cells exceeds budget {cell_budget}")
    values = np.empty((ell_max + 1, n_max + 1))
    for ell in range(ell_max + 1):
        values[ell] = kappa_column(ell, n_max)
    n = np.arange(n_max + 1, dtype=float)[None, :]
    l = np.arange(ell_max + 1, dtype=float)[:, None]
    hat = _SQRT_8E3 * ((n + 1.0) * (n + l + 1.5)) ** -0.25
    with np.errstate(divide="ignore"):
        tilde = _SQRT_8E3 / np.sqrt(n + np.sqrt(l))
    return KappaTable(n_max, ell_max, values, hat, tilde)


@dataclass(frozen=True)
class ResidueMonotonicity:
    residue: int
    verdict: str  # "monotone" | "not-monotone" | "inconclusive"
    direction: str  # "increasing" | "decreasing" | "constant" | "mixed" | "n/a"


def mod3_monotonicity_check(
    ell: int, n_min: int, n_max: int
) -> tuple[ResidueMonotonicity, ...]:
    """Monotonicity of kappa_{3k+r, ell} over [n_min, n_max] per residue r.

    Ties (|diff| <= 1e-14, machine noise on an identically-zero
    subsequence) do not break monotonicity; zero genuine sign flips are
    tolerated.
    """
    if n_max - n_min < 30:
        raise ValueError("window must span at least 30 indices")
    col = kappa_column(ell, n_max)
    out = []
    for r in range(3):
        vals = col[[n for n in range(n_min, n_max + 1) if n % 3 == r]]
        if len(vals) < 3:
            out.append(ResidueMonotonicity(r, "inconclusive", "n/a"))
            continue
        d = np.diff(vals)
        pos = bool(np.any(d > _MONO_DEADBAND))
        neg = bool(np.any(d < -_MONO_DEADBAND))
        if pos and neg:
            out.append(ResidueMonotonicity(r, "not-monotone", "mixed"))
        elif pos:
            out.append(ResidueMonotonicity(r, "monotone", "increasing"))
        elif neg:
            out.append(ResidueMonotonicity(r, "monotone", "decreasing"))
        else:
            out.append(ResidueMonotonicity(r, "monotone", "constant"))
    return tuple(out)


@dataclass(frozen=True)
class IdentityAudit:
    name: str
    index_range: str
    max_discrepancy: float
    verdict: str  # "consistent" | "inconsistent as printed"


@dataclass(frozen=True)
class IdentityAuditReport:
    entries: tuple[IdentityAudit, ...] = field(default_factory=tuple)
    tolerance: float = 1e-10

    def entry(self, name: str) -> IdentityAudit:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def _verdict(disc: float, tol: float) -> str:
    return "consistent" if disc <= tol else "inconsistent as printed"


def _closed_form_coeff(n: int, ell: int, j: int) -> float:
    num = 1.0
    for i in range(1, ell + 1):
        num *= n + i + 0.5
    den = 1.0
    for i in range(ell + 1):
        if i != j:
            den *= 2 * n + i + j + 2
    return num / den


def audit_identities(n_max: int = 60, ell_max: int = 10) -> IdentityAuditReport:
    """Evaluate every printed alternative formula against the oracle.

    Diagnostic only: formulas that disagree are recorded with their
    measured discrepancy, never corrected silently.
    """
    tol = 1e-10
    entries = []
    cols = {ell: kappa_column(ell, n_max + ell_max + 2) for ell in range(ell_max + 1)}
    k0 = cols[0]

    # l=0 closed form as printed: (-1)^n sin(n pi / 3) / (n+1)
    disc = max(
        abs(((-1.0) ** n) * math.sin(n * math.pi / 3.0) / (n + 1.0) - k0[n])
        for n in range(n_max + 1)
    )
    entries.append(
        IdentityAudit("ell0-closed-form-printed", f"n <= {n_max}", disc, _verdict(disc, tol))
    )

    # shifted/renormalized variant: (2/sqrt(3)) (-1)^n sin((n+1) pi / 3) / (n+1)
    disc = max(
        abs(
            (2.0 / math.sqrt(3.0))
            * ((-1.0) ** n)
            * math.sin((n + 1.0) * math.pi / 3.0)
            / (n + 1.0)
            - k0[n]
        )
        for n in range(n_max + 1)
    )
    entries.append(
        IdentityAudit("ell0-closed-form-shifted", f"n <= {n_max}", disc, _verdict(disc, tol))
    )

    # recurrence in l as printed:
    # -kappa_{n,l}/2 = [(n+l+1/2) kappa_{n,l-1} + (n+1/2) kappa_{n+1,l-1}] / (2n+l+1)
    disc = 0.0
    for ell in range(1, ell_max + 1):
        lo, hi = cols[ell - 1], cols[ell]
        for n in range(n_max + 1):
            rhs = ((n + ell + 0.5) * lo[n] + (n + 0.5) * lo[n + 1]) / (2 * n + ell + 1.0)
            disc = max(disc, abs(-2.0 * rhs - hi[n]))
    entries.append(
        IdentityAudit(
            "ell-recurrence-printed",
            f"n <= {n_max}, 1 <= l <= {ell_max}",
            disc,
            _verdict(disc, tol),
        )
    )

    # l=1 expansion: kappa_{n,1} = -(kappa_{n,0} + kappa_{n+1,0})
    disc = max(abs(-(k0[n] + k0[n + 1]) - cols[1][n]) for n in range(n_max + 1))
    entries.append(
        IdentityAudit("ell1-expansion", f"n <= {n_max}", disc, _verdict(disc, tol))
    )

    # l=2 expansion as printed:
    # kappa_{n,2} = (n+5/2)/(n+2) kappa_{n,0} + kappa_{n+1,0} + (n+3/2)/(n+2) kappa_{n+2,0}
    disc = max(
        abs(
            (n + 2.5) / (n + 2.0) * k0[n]
            + k0[n + 1]
            + (n + 1.5) / (n + 2.0) * k0[n + 2]
            - cols[2][n]
        )
        for n in range(n_max + 1)
    )
    entries.append(
        IdentityAudit("ell2-expansion-printed", f"n <= {n_max}", disc, _verdict(disc, tol))
    )

    # full closed-form solution in terms of the l=0 values
    disc = 0.0
    for ell in range(ell_max + 1):
        for n in range(n_max + 1):
            s = sum(
                math.comb(ell, j) * _closed_form_coeff(n, ell, j) * k0[n + j]
                for j in range(ell + 1)
            )
            disc = max(disc, abs(((-2.0) ** ell) * s - cols[ell][n]))
    entries.append(
        IdentityAudit(
            "closed-form-solution",
            f"n <= {n_max}, l <= {ell_max}",
            disc,
            _verdict(disc, tol),
        )
    )

    return IdentityAuditReport(tuple(entries), tol)

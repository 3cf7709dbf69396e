"""Jacobi polynomials and the three-term machinery of the radial basis.

Everything here is a pure function of its arguments.  Normalization is
Rodrigues' (P_n(1) = binom(n+alpha, n)); the multiplication-by-t
coefficients a_{n,l}, b_{n,l} refer to the orthonormalized polynomials
p_n = P_n / ||P_n||.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .special import lgamma

# degree recurrence is rescaled by an exact power of two past this point
_RESCALE_LIMIT = 1e150

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class JacobiParams:
    """Weight exponents for (1-x)^alpha (1+x)^beta on [-1, 1].

    For the angular sector l the radial profiles use alpha = 1/2,
    beta = l + 1/2; build those with :meth:`for_sector`.
    """

    alpha: float
    beta: float
    ell: int = 0

    def __post_init__(self):
        if self.alpha <= -1.0 or self.beta <= -1.0:
            raise ValueError("weight exponents must exceed -1")

    @classmethod
    def for_sector(cls, ell: int) -> "JacobiParams":
        if ell < 0:
            raise ValueError("ell must be nonnegative")
        return cls(alpha=0.5, beta=ell + 0.5, ell=ell)


def recurrence_abc(params: JacobiParams, n: int) -> tuple[float, float, float]:
    """Degree-recurrence coefficients at index n >= 1.

    P_{n+1} = (A_n x + B_n) P_n - C_n P_{n-1}, with C_n > 0.
    """
    a, b = params.alpha, params.beta
    s = 2.0 * n + a + b
    d = 2.0 * (n + 1.0) * (n + a + b + 1.0)
    A = (s + 1.0) * (s + 2.0) / d
    B = (a * a - b * b) * (s + 1.0) / (d * s)
    C = 2.0 * (n + a) * (n + b) * (s + 2.0) / (d * s)
    return A, B, C


def _eval_scaled(params: JacobiParams, n: int, x: float) -> tuple[float, int]:
    # returns (mantissa, e) with P_n(x) = mantissa * 2**e; power-of-two
    # rescaling is exact, so no precision is lost to the overflow guard
    a, b = params.alpha, params.beta
    if n == 0:
        return 1.0, 0
    p_prev = 1.0
    p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    e = 0
    for k in range(1, n):
        A, B, C = recurrence_abc(params, k)
        p_prev, p = p, (A * x + B) * p - C * p_prev
        if abs(p) > _RESCALE_LIMIT:
            shift = math.frexp(p)[1]
            p = math.ldexp(p, -shift)
            p_prev = math.ldexp(p_prev, -shift)
            e += shift
    return p, e


def jacobi_eval(params: JacobiParams, n: int, x: float) -> float:
    """P_n^{(alpha,beta)}(x) by the degree recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if not -1.0 <= x <= 1.0:
        raise ValueError("x outside [-1, 1]")
    m, e = _eval_scaled(params, n, x)
    return math.ldexp(m, e)


def jacobi_value_at_one(params: JacobiParams, n: int) -> float:
    """P_n(1) = prod_{k=1..n} (alpha+k)/k; cancellation-free."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    out = 1.0
    for k in range(1, n + 1):
        out *= (params.alpha + k) / k
    return out


def jacobi_log_norm_sq(params: JacobiParams, n: int) -> float:
    """log ||P_n||^2 against the weight, via the Gamma-ratio closed form."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    a, b = params.alpha, params.beta
    return (
        (a + b + 1.0) * _LOG2
        - math.log(2.0 * n + a + b + 1.0)
        + lgamma(n + a + 1.0)
        + lgamma(n + b + 1.0)
        - lgamma(n + a + b + 1.0)
        - lgamma(n + 1.0)
    )


def jacobi_norm_sq(params: JacobiParams, n: int) -> float:
    return math.exp(jacobi_log_norm_sq(params, n))


def norm_sq_ratio(params: JacobiParams, n: int) -> float:
    """||P_{n-1}||^2 / ||P_n||^2 for n >= 1, closed form."""
    if n < 1:
        raise ValueError("ratio needs n >= 1")
    a, b = params.alpha, params.beta
    s = 2.0 * n + a + b
    return (s + 1.0) / (s - 1.0) * (n * (n + a + b)) / ((n + a) * (n + b))


@dataclass(frozen=True)
class ThreeTermCoeffs:
    """Coefficients of t p_n = b_{n-1} p_{n-1} + a_n p_n + b_n p_{n+1}.

    a_tilde is a valid lower bound on a only for l >= 4 (flagged by
    a_tilde_binding); b_tilde bounds b from above for every l.
    """

    n: int
    a: float
    b: float
    a_tilde: float
    b_tilde: float
    a_tilde_binding: bool


def three_term_coeffs(ell: int, n: int) -> ThreeTermCoeffs:
    if n < 0 or ell < 0:
        raise ValueError("indices must be nonnegative")
    u = 2.0 * n + ell + 3.0
    a = ell * (ell + 1.0) / ((2.0 * n + ell + 1.0) * u)
    b = 2.0 * math.sqrt(
        (n + 1.0) * (n + 1.5) * (n + ell + 1.5) * (n + ell + 2.0)
        / ((2.0 * n + ell + 2.0) * u * u * (2.0 * n + ell + 4.0))
    )
    a_tilde = (ell / u) ** 2
    b_tilde = (1.0 - ell / u) * (1.0 - n / u)
    return ThreeTermCoeffs(n, a, b, a_tilde, b_tilde, ell >= 4)


def three_term_a_fraction(ell: int, n: int) -> Fraction:
    """Diagonal coefficient a_{n,l} as an exact rational."""
    return Fraction(ell * (ell + 1), (2 * n + ell + 1) * (2 * n + ell + 3))


def three_term_b_sq_fraction(ell: int, n: int) -> Fraction:
    """b_{n,l}^2 as an exact rational (b itself is rational only when
    this is a perfect square, e.g. 1/4 for every n at l = 0)."""
    num = (
        Fraction(n + 1)
        * Fraction(2 * n + 3, 2)
        * Fraction(2 * (n + ell) + 3, 2)
        * Fraction(n + ell + 2)
    )
    den = (
        Fraction(2 * n + ell + 2)
        * Fraction(2 * n + ell + 3) ** 2
        * Fraction(2 * n + ell + 4)
    )
    return 4 * num / den

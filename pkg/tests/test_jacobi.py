import math
import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.special import eval_jacobi, roots_jacobi

from kacgap.jacobi import (
    JacobiParams,
    ThreeTermCoeffs,
    jacobi_eval,
    jacobi_norm_sq,
    jacobi_value_at_one,
    norm_sq_ratio,
    recurrence_abc,
    three_term_a_fraction,
    three_term_b_sq_fraction,
    three_term_coeffs,
)


# ------------------------------------------------------ polynomial values


def test_matches_scipy_small_degrees():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randrange(0, 30)
        ell = rng.randrange(0, 12)
        x = rng.uniform(-1.0, 1.0)
        p = JacobiParams.for_sector(ell)
        want = float(eval_jacobi(n, p.alpha, p.beta, x))
        got = jacobi_eval(p, n, x)
        assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


def test_value_at_one_closed_form():
    # P_n(1) = binom(n + alpha, n)
    p = JacobiParams(0.5, 1.5)
    assert abs(jacobi_value_at_one(p, 1) - 1.5) <= 1e-15
    p2 = JacobiParams(0.5, 0.5)
    assert abs(jacobi_value_at_one(p2, 2) - 15.0 / 8.0) <= 1e-15
    for n in range(12):
        got = jacobi_value_at_one(JacobiParams(0.5, 2.5), n)
        want = float(eval_jacobi(n, 0.5, 2.5, 1.0))
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


def test_chebyshev_root_is_zero():
    # alpha = beta = 1/2: P_2 vanishes at cos(2pi/3) scaled points;
    # scipy agreement pins the value, the root check pins the sign map
    assert abs(jacobi_eval(JacobiParams(0.5, 0.5), 2, -0.5)) <= 1e-15


def test_domain_and_degree_errors():
    p = JacobiParams.for_sector(0)
    with pytest.raises(ValueError):
        jacobi_eval(p, -1, 0.0)
    with pytest.raises(ValueError):
        jacobi_eval(p, 2, 1.5)
    with pytest.raises(ValueError):
        JacobiParams(-1.0, 0.5)


# ------------------------------------------------------ three-term identity


def test_three_term_residual_on_grid():
    # P_{n+1} = (A x + B) P_n - C P_{n-1} across the sector family
    grid = np.linspace(-1.0, 1.0, 100)
    for ell in (0, 1, 2, 5, 17, 40, 70):
        p = JacobiParams.for_sector(ell)
        for n in (1, 2, 7, 50, 199):
            A, B, C = recurrence_abc(p, n)
            for x in grid[::7]:
                pm1 = jacobi_eval(p, n - 1, x)
                pn = jacobi_eval(p, n, x)
                pp1 = jacobi_eval(p, n + 1, x)
                resid = abs((A * x + B) * pn - C * pm1 - pp1)
                assert resid <= 1e-10 * max(1.0, abs(pp1))


def test_recurrence_against_scipy_coefficients():
    rng = random.Random(5)
    for _ in range(200):
        ell = rng.randrange(0, 20)
        n = rng.randrange(1, 100)
        x = rng.uniform(-1.0, 1.0)
        p = JacobiParams.for_sector(ell)
        A, B, C = recurrence_abc(p, n)
        pm1 = float(eval_jacobi(n - 1, p.alpha, p.beta, x))
        pn = float(eval_jacobi(n, p.alpha, p.beta, x))
        pp1 = float(eval_jacobi(n + 1, p.alpha, p.beta, x))
        assert abs((A * x + B) * pn - C * pm1 - pp1) <= 1e-9 * max(1.0, abs(pp1))


# ------------------------------------------------------ norms


def test_norm_sq_base_case():
    # ||P_0||^2 for alpha = beta = 1/2 is the weight integral, pi/2
    assert abs(jacobi_norm_sq(JacobiParams(0.5, 0.5), 0) - math.pi / 2.0) <= 1e-14


def test_norm_sq_against_quadrature():
    for ell in (0, 1, 3, 8):
        p = JacobiParams.for_sector(ell)
        x, w = roots_jacobi(60, p.alpha, p.beta)
        for n in (0, 1, 2, 5, 11):
            vals = np.array([jacobi_eval(p, n, xi) for xi in x])
            quad = float(np.sum(w * vals * vals))
            assert abs(quad - jacobi_norm_sq(p, n)) <= 1e-10 * quad


def test_orthonormality_via_quadrature():
    # normalized polynomials integrate to the identity matrix
    for ell in range(11):
        p = JacobiParams.for_sector(ell)
        x, w = roots_jacobi(40, p.alpha, p.beta)
        norms = [math.sqrt(jacobi_norm_sq(p, n)) for n in range(21)]
        vals = np.array(
            [[jacobi_eval(p, n, xi) / norms[n] for xi in x] for n in range(21)]
        )
        gram = vals @ (w[:, None] * vals.T)
        assert np.abs(gram - np.eye(21)).max() <= 1e-8


def test_norm_ratio_example():
    assert abs(norm_sq_ratio(JacobiParams.for_sector(0), 1) - 16.0 / 9.0) <= 1e-14


def test_norm_ratio_consistent_with_norms():
    rng = random.Random(7)
    for _ in range(100):
        ell = rng.randrange(0, 15)
        n = rng.randrange(1, 40)
        p = JacobiParams.for_sector(ell)
        want = jacobi_norm_sq(p, n - 1) / jacobi_norm_sq(p, n)
        got = norm_sq_ratio(p, n)
        assert abs(got - want) <= 1e-11 * want


# ------------------------------------------------------ sector coefficients


def test_a_coefficient_examples():
    assert abs(three_term_coeffs(1, 0).a - 0.25) <= 1e-15
    assert three_term_a_fraction(1, 0) == Fraction(1, 4)
    # a~ at (l=4, n=0) is (4/7)^2
    c = three_term_coeffs(4, 0)
    assert abs(c.a_tilde - 16.0 / 49.0) <= 1e-15


def test_b_at_ell_zero_is_half_exactly():
    for n in range(60):
        assert three_term_b_sq_fraction(0, n) == Fraction(1, 4)
        assert three_term_coeffs(0, n).b == 0.5


def test_b_never_exceeds_half():
    for ell in range(0, 80, 7):
        for n in range(0, 300, 11):
            assert three_term_coeffs(ell, n).b <= 0.5 + 1e-15


def test_b_matches_exact_fraction():
    rng = random.Random(9)
    for _ in range(300):
        ell = rng.randrange(0, 40)
        n = rng.randrange(0, 150)
        b = three_term_coeffs(ell, n).b
        assert abs(b * b - float(three_term_b_sq_fraction(ell, n))) <= 1e-14


def test_tilde_envelope_direction():
    # the envelope underestimates a (so 1 - a~ >= 1 - a) and
    # overestimates b^2; the binding flag marks the l >= 4 validity range
    for ell in (4, 10, 33, 70):
        for n in range(0, 200, 3):
            c = three_term_coeffs(ell, n)
            assert c.a_tilde <= c.a + 1e-15
            assert c.b * c.b <= c.b_tilde + 1e-15
            assert c.a_tilde_binding
    assert not three_term_coeffs(3, 0).a_tilde_binding


def test_coeffs_type():
    c = three_term_coeffs(2, 3)
    assert isinstance(c, ThreeTermCoeffs)
    assert c.n == 3

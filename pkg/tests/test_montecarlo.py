import math
import os

import numpy as np
import pytest

from kacgap.montecarlo import (
    EQ_CONST,
    EntropySeries,
    InsufficientData,
    NegativeRate,
    ParticleState,
    SimConfig,
    Xoshiro,
    available_backends,
    backend_name,
    equilibrium_radial_density,
    fit_decay_rate,
    jump_rates,
    radial_histogram,
    relative_entropy,
    sample_initial,
    simulate,
    step,
)
from kacgap.montecarlo import _py_kernel

HAS_COMPILED = "compiled" in available_backends()


# ------------------------------------------------------------ RNG


def test_rng_deterministic():
    a = Xoshiro(42, 0)
    b = Xoshiro(42, 0)
    assert [a.next64() for _ in range(20)] == [b.next64() for _ in range(20)]


def test_rng_streams_differ():
    a = Xoshiro(42, 0)
    b = Xoshiro(42, 1)
    assert [a.next64() for _ in range(8)] != [b.next64() for _ in range(8)]


def test_rng_uniform_range_and_moments():
    rng = Xoshiro(7, 3)
    xs = [rng.uniform() for _ in range(200_000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(np.mean(xs) - 0.5) < 0.005
    assert abs(np.var(xs) - 1.0 / 12.0) < 0.002


def test_rng_zero_seed_not_stuck():
    rng = Xoshiro(0, 0)
    vals = {rng.next64() for _ in range(100)}
    assert len(vals) == 100


def test_gauss_pair_moments():
    rng = Xoshiro(11, 0)
    xs = []
    for _ in range(100_000):
        g1, g2 = _py_kernel.gauss_pair(rng)
        xs.append(g1)
        xs.append(g2)
    xs = np.array(xs)
    assert abs(xs.mean()) < 0.01
    assert abs(xs.std() - 1.0) < 0.01
    assert abs(np.mean(xs**3)) < 0.03


def test_unit3_isotropy():
    rng = Xoshiro(13, 0)
    vs = np.array([_py_kernel.unit3(rng) for _ in range(100_000)])
    norms = np.linalg.norm(vs, axis=1)
    assert np.abs(norms - 1.0).max() < 1e-12
    assert np.abs(vs.mean(axis=0)).max() < 0.01
    cov = vs.T @ vs / len(vs)
    assert np.abs(cov - np.eye(3) / 3.0).max() < 0.01


# ------------------------------------------------------------ state setup


def test_sample_initial_statistics():
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(5, 0)
    rs = []
    for _ in range(50_000):
        state = sample_initial(cfg, rng)
        rs.append(math.sqrt(state.speeds_sq()[0] / 2.0))
    rs = np.array(rs)
    # density 2(1-x) on the radius has mean 1/3
    se = rs.std() / math.sqrt(len(rs))
    assert abs(rs.mean() - 1.0 / 3.0) < 3.0 * se
    assert rs.min() >= 0.0 and rs.max() <= 1.0


def test_sample_initial_equilibrium_statistics():
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="equilibrium")
    rng = Xoshiro(6, 0)
    rs = np.array(
        [
            math.sqrt(sample_initial(cfg, rng).speeds_sq()[0] / 2.0)
            for _ in range(50_000)
        ]
    )
    # equilibrium radial density (16/pi) r^2 sqrt(1-r^2) has mean 32/(15 pi)
    want = 32.0 / (15.0 * math.pi)
    se = rs.std() / math.sqrt(len(rs))
    assert abs(rs.mean() - want) < 3.0 * se


def test_initial_state_conserves():
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(9, 0)
    for _ in range(2000):
        state = sample_initial(cfg, rng)
        v = state.flat()
        for c in range(3):
            assert abs(v[c] + v[3 + c] + v[6 + c]) <= 1e-12
        assert abs(sum(x * x for x in v) - 3.0) <= 1e-12


def test_state_invariant_enforced():
    with pytest.raises(ValueError):
        ParticleState((1.0, 0.0, 0.0), (1.0, 0.0, 0.0), (1.0, 0.0, 0.0))


# ------------------------------------------------------------ rates and jumps


def test_jump_rates_alpha_zero_uniform():
    cfg = SimConfig(alpha=0, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(3, 0)
    state = sample_initial(cfg, rng)
    assert jump_rates(state, 0) == pytest.approx([1.0 / 3.0] * 3)


def test_jump_rates_alpha_two_form():
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(4, 0)
    state = sample_initial(cfg, rng)
    rates = jump_rates(state, 2)
    for lam, s2 in zip(rates, state.speeds_sq()):
        assert lam == pytest.approx((2.0 - s2) / 4.0, abs=1e-12)
    assert all(lam >= 0.0 for lam in rates)


def test_jump_rates_nonnegative_on_constraint_manifold():
    # zero momentum forces |v_2|^2 + |v_3|^2 >= |v_1|^2 / 2, so energy 3
    # caps every |v_k|^2 at 2 and the alpha = 2 rate stays nonnegative
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="equilibrium")
    rng = Xoshiro(14, 0)
    for _ in range(3000):
        state = sample_initial(cfg, rng)
        assert max(state.speeds_sq()) <= 2.0 + 1e-12
        assert all(lam >= 0.0 for lam in jump_rates(state, 2))


def test_jump_rates_negative_guard():
    # unreachable from a valid state; exercised through a stub
    class Stub:
        def speeds_sq(self):
            return (2.5, 0.25, 0.25)

    with pytest.raises(NegativeRate):
        jump_rates(Stub(), 2)


def test_step_conserves_and_moves():
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(8, 0)
    state = sample_initial(cfg, rng)
    for _ in range(500):
        state, dt, k = step(state, 2, rng)
        assert dt > 0.0
        assert 0 <= k <= 2
        v = state.flat()
        for c in range(3):
            assert abs(v[c] + v[3 + c] + v[6 + c]) <= 1e-9
        assert abs(sum(x * x for x in v) - 3.0) <= 1e-9


def test_step_alpha_zero_picks_uniformly():
    cfg = SimConfig(alpha=0, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(15, 0)
    state = sample_initial(cfg, rng)
    counts = [0, 0, 0]
    for _ in range(30_000):
        state, _, k = step(state, 0, rng)
        counts[k] += 1
    # chi-square against uniform, 2 dof; 18.4 ~ p = 1e-4
    expect = sum(counts) / 3.0
    chi2 = sum((c - expect) ** 2 / expect for c in counts)
    assert chi2 < 18.4


def test_step_alpha_two_avoids_fast_particles():
    # a particle at |v|^2 = 2 has zero rate and can never be the jumper
    cfg = SimConfig(alpha=2, replicas=1, seed=0, initial="linear")
    rng = Xoshiro(16, 0)
    state = sample_initial(cfg, rng)
    for _ in range(2000):
        new_state, _, k = step(state, 2, rng)
        if max(state.speeds_sq()) > 1.999:
            assert state.speeds_sq()[k] < 1.999
        state = new_state


# ------------------------------------------------------------ densities


def test_equilibrium_density_normalized():
    xs = np.linspace(0.0, 1.0, 20_001)
    vals = equilibrium_radial_density(xs)
    integral = np.trapezoid(vals, xs)
    assert abs(integral - 1.0) <= 1e-6
    assert equilibrium_radial_density(0.0) == 0.0
    assert equilibrium_radial_density(1.0) == 0.0
    with pytest.raises(ValueError):
        equilibrium_radial_density(1.5)


def test_equilibrium_constant():
    assert EQ_CONST == pytest.approx(16.0 / math.pi, abs=1e-15)
    assert EQ_CONST == pytest.approx(5.09295817894, abs=1e-9)


def test_radial_histogram_density():
    rng = np.random.default_rng(2)
    samples = rng.uniform(0.0, 1.0, 100_000)
    hist = radial_histogram(samples, 50)
    widths = np.diff(hist.edges)
    assert abs(float(np.sum(hist.density * widths)) - 1.0) <= 1e-9
    assert np.abs(hist.density - 1.0).max() < 0.1


def test_radial_histogram_errors():
    with pytest.raises(ValueError):
        radial_histogram(np.array([]), 10)


# ------------------------------------------------------------ entropy


def kl_oracle(bins: int = 100) -> float:
    """KL divergence of 2(1-x) from equilibrium over the estimators'
    support [1/bins, 1] (both drop the first bin, where the left-edge
    reference density vanishes), by adaptive quadrature."""
    from scipy.integrate import quad

    def integrand(x):
        p = 2.0 * (1.0 - x)
        q = equilibrium_radial_density(x)
        if p <= 0.0 or q <= 0.0:
            return 0.0
        return p * math.log(p / q)

    val, _ = quad(integrand, 1.0 / bins, 1.0, limit=200)
    return val


def linear_start_histogram(bins: int = 100):
    # exact per-bin averages of the density 2(1-x)
    edges = np.linspace(0.0, 1.0, bins + 1)
    dens = np.array(
        [
            (2.0 * (1.0 - l) + 2.0 * (1.0 - r)) / 2.0
            for l, r in zip(edges[:-1], edges[1:])
        ]
    )
    from kacgap.montecarlo import RadialHistogram

    return RadialHistogram(edges, dens)


def test_kl_estimators_near_integral_oracle():
    hist = linear_start_histogram()
    oracle = kl_oracle()
    assert oracle == pytest.approx(1.474508, abs=1e-5)
    for q_at in ("left", "midpoint"):
        est = relative_entropy(hist, q_at=q_at)
        assert abs(est - oracle) <= 0.05 * oracle
    # and the two estimator conventions agree with each other within 5%
    left = relative_entropy(hist, q_at="left")
    mid = relative_entropy(hist, q_at="midpoint")
    assert abs(left - mid) <= 0.05 * max(left, mid)


def test_relative_entropy_zero_against_itself():
    # equilibrium histogram against the equilibrium reference
    edges = np.linspace(0.0, 1.0, 101)
    mids = 0.5 * (edges[:-1] + edges[1:])
    hist_vals = equilibrium_radial_density(mids)
    from kacgap.montecarlo import RadialHistogram

    width = float(np.diff(edges)[0])
    hist_vals = hist_vals / float(np.sum(hist_vals * width))
    h = relative_entropy(RadialHistogram(edges, hist_vals), q_at="midpoint")
    assert abs(h) < 0.005


def test_relative_entropy_rejects_unknown_reference():
    hist = linear_start_histogram()
    with pytest.raises(ValueError):
        relative_entropy(hist, q_at="right")


def test_fit_decay_rate_exact_exponential():
    times = tuple(float(t) for t in range(0, 26, 2))
    series = EntropySeries(times, tuple(1.5 * math.exp(-0.3 * t) for t in times))
    assert fit_decay_rate(series) == pytest.approx(0.3, abs=1e-12)


def test_fit_decay_rate_ignores_floored_points():
    times = tuple(float(t) for t in range(0, 26, 2))
    vals = tuple(max(1.5 * math.exp(-0.5 * t), 1e-4) for t in times)
    # points clamped at 1e-4 sit below the e^-6 floor and are dropped
    assert fit_decay_rate(EntropySeries(times, vals)) == pytest.approx(0.5, abs=1e-9)


def test_fit_decay_rate_insufficient():
    with pytest.raises(InsufficientData):
        fit_decay_rate(EntropySeries((0.0, 1.0, 2.0), (1e-9, 1e-9, 1e-9)))


# ------------------------------------------------------------ config


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(alpha=1)
    with pytest.raises(ValueError):
        SimConfig(replicas=0)
    with pytest.raises(ValueError):
        SimConfig(bins=5)
    with pytest.raises(ValueError):
        SimConfig(frames=(0.0, 2.0, 1.0))
    with pytest.raises(ValueError):
        SimConfig(frames=(-1.0, 2.0))
    with pytest.raises(ValueError):
        SimConfig(initial="gaussian")


def test_config_initial_alias():
    assert SimConfig(initial="2(1-x)").initial == "linear"


def test_config_default_frames_by_alpha():
    assert SimConfig(alpha=2).frames == tuple(float(t) for t in range(0, 25, 2))
    assert SimConfig(alpha=0).frames == (0.0, 0.5, 2.0, 3.5, 5.0, 10.0)


# ------------------------------------------------------------ simulation


def test_simulate_python_small():
    cfg = SimConfig(alpha=2, replicas=500, seed=1, initial="linear")
    res = simulate(cfg, backend="python")
    assert res.backend == "python"
    assert res.radials.shape == (500, 13, 3)
    assert res.max_residual <= 1e-9
    assert np.all(res.radials >= 0.0) and np.all(res.radials <= 1.0 + 1e-12)


def test_simulate_frame_zero_matches_initial_law():
    # KS distance of the t=0 sample against the 2(1-x) law CDF
    cfg = SimConfig(alpha=2, replicas=20_000, seed=2, initial="linear")
    res = simulate(cfg)
    r0 = np.sort(res.radials[:, 0, 0])
    cdf = 2.0 * r0 - r0 * r0
    emp = np.arange(1, len(r0) + 1) / len(r0)
    ks = float(np.abs(emp - cdf).max())
    assert ks < 0.01


def test_simulate_entropy_decreases():
    cfg = SimConfig(alpha=2, replicas=5000, seed=3, initial="linear")
    res = simulate(cfg)
    hs = res.entropy["sampled"].values
    assert hs[-1] < hs[0]
    assert hs[0] > 1.0


def test_simulate_deterministic_given_seed():
    cfg = SimConfig(alpha=2, replicas=300, seed=5, initial="linear")
    a = simulate(cfg, backend="python")
    b = simulate(cfg, backend="python")
    assert np.array_equal(a.radials, b.radials)


def test_simulate_alpha_zero_runs():
    cfg = SimConfig(alpha=0, replicas=800, seed=4, initial="linear")
    res = simulate(cfg)
    assert res.max_residual <= 1e-9
    assert res.entropy["sampled"].values[-1] < res.entropy["sampled"].values[0]


def test_simulate_unknown_backend():
    with pytest.raises(ValueError):
        simulate(SimConfig(replicas=10), backend="gpu")


@pytest.mark.skipif(not HAS_COMPILED, reason="compiled kernel not built")
def test_backends_bit_identical():
    cfg = SimConfig(alpha=2, replicas=1500, seed=6, initial="linear")
    py = simulate(cfg, backend="python")
    cc = simulate(cfg, backend="compiled", threads=1)
    assert np.array_equal(py.radials, cc.radials)


@pytest.mark.skipif(not HAS_COMPILED, reason="compiled kernel not built")
def test_compiled_thread_count_invariant():
    cfg = SimConfig(alpha=2, replicas=2000, seed=7, initial="equilibrium")
    one = simulate(cfg, backend="compiled", threads=1)
    four = simulate(cfg, backend="compiled", threads=4)
    assert np.array_equal(one.radials, four.radials)


@pytest.mark.skipif(not HAS_COMPILED, reason="compiled kernel not built")
def test_threads_env_cap(monkeypatch):
    monkeypatch.setenv("KACGAP_THREADS", "2")
    cfg = SimConfig(alpha=2, replicas=200, seed=8)
    res = simulate(cfg, backend="compiled", threads=16)
    assert res.threads <= 2


def test_backend_name_reported():
    assert backend_name() in ("python", "compiled")
    assert "python" in available_backends()

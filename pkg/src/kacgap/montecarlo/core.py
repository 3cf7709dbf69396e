"""Simulation orchestration: configs, histograms, entropy series, rate fit.

Replicas are embarrassingly parallel with per-replica RNG streams, so the
result is independent of chunking and thread count; the compiled kernel
releases the GIL and runs chunks on a thread pool, the interpreted one
runs them serially.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _py_kernel
from ._py_kernel import Xoshiro

try:
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "compiled" if _ckernel is not None else "python"

EQ_CONST = 16.0 / math.pi
ENTROPY_FLOOR = math.exp(-6.0)
_SQ2 = math.sqrt(2.0)

DEFAULT_FRAMES = {
    2: tuple(float(t) for t in range(0, 25, 2)),
    0: (0.0, 0.5, 2.0, 3.5, 5.0, 10.0),
}

_INITIAL_ALIASES = {"2(1-x)": "linear", "linear": "linear", "equilibrium": "equilibrium"}
_INIT_KIND = {"linear": 0, "equilibrium": 1}


class NegativeRate(Exception):
    """State constraints violated far enough to make a jump rate negative."""


class InsufficientData(Exception):
    """Fewer than three entropy points above the noise floor."""


def backend_name() -> str:
    return BACKEND


def available_backends() -> tuple[str, ...]:
    return ("python", "compiled") if _ckernel is not None else ("python",)


@dataclass(frozen=True)
class SimConfig:
    alpha: int = 2
    replicas: int = 100_000
    frames: tuple[float, ...] | None = None
    seed: int = 0
    bins: int = 100
    initial: str = "linear"

    def __post_init__(self):
        if self.alpha not in (0, 2):
            raise ValueError("alpha must be 0 or 2")
        if self.replicas < 1:
            raise ValueError("need at least one replica")
        if self.bins < 10:
            raise ValueError("need at least 10 bins")
        name = _INITIAL_ALIASES.get(self.initial)
        if name is None:
            raise ValueError(f"unknown initial density {self.initial!r}")
        object.__setattr__(self, "initial", name)
        frames = self.frames if self.frames is not None else DEFAULT_FRAMES[self.alpha]
        frames = tuple(float(t) for t in frames)
        if not frames:
            raise ValueError("need at least one frame")
        if frames[0] < 0.0:
            raise ValueError("frame times must be nonnegative")
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError("frames must be strictly increasing")
        object.__setattr__(self, "frames", frames)


_STATE_TOL = 1e-9


@dataclass(frozen=True)
class ParticleState:
    """Three velocities on the zero-momentum, energy-3 sphere."""

    v1: tuple[float, float, float]
    v2: tuple[float, float, float]
    v3: tuple[float, float, float]

    def __post_init__(self):
        m = [self.v1[i] + self.v2[i] + self.v3[i] for i in range(3)]
        en = sum(c * c for v in (self.v1, self.v2, self.v3) for c in v)
        if max(abs(c) for c in m) > _STATE_TOL or abs(en - 3.0) > _STATE_TOL:
            raise ValueError("state violates momentum/energy constraints")

    def flat(self) -> list:
        return [*self.v1, *self.v2, *self.v3]

    @classmethod
    def from_flat(cls, v) -> "ParticleState":
        return cls(tuple(v[0:3]), tuple(v[3:6]), tuple(v[6:9]))

    def speeds_sq(self) -> tuple[float, float, float]:
        return tuple(sum(c * c for c in v) for v in (self.v1, self.v2, self.v3))


def jump_rates(state: ParticleState, alpha: int) -> tuple[float, float, float]:
    """Per-particle exponential clock rates; (2 - |v_k|^2)/4 for alpha = 2,
    1/3 for alpha = 0."""
    if alpha == 0:
        return (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    if alpha != 2:
        raise ValueError("alpha must be 0 or 2")
    rates = []
    for s in state.speeds_sq():
        lam = (2.0 - s) / 4.0
        if lam < -_STATE_TOL:
            raise NegativeRate(f"|v|^2 = {s} exceeds the energy budget")
        rates.append(max(lam, 0.0))
    return tuple(rates)


def sample_initial(cfg: SimConfig, rng: Xoshiro) -> ParticleState:
    """Draw an initial state from the configured radial density."""
    v = _py_kernel.init_state(rng, _INIT_KIND[cfg.initial])
    return ParticleState.from_flat(v)


def step(state: ParticleState, alpha: int, rng: Xoshiro):
    """One jump: returns (new state, waiting time, fixed particle index)."""
    jump_rates(state, alpha)  # constraint check; raises NegativeRate
    v = state.flat()
    dt, k, _ = _py_kernel.single_jump(v, alpha, rng)
    return ParticleState.from_flat(v), dt, k


def equilibrium_radial_density(r):
    """(16/pi) r^2 sqrt(1 - r^2) on [0, 1]."""
    arr = np.asarray(r, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise ValueError("radius outside [0, 1]")
    out = EQ_CONST * arr * arr * np.sqrt(1.0 - arr * arr)
    return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class RadialHistogram:
    """Density estimate over uniform bins of [0, 1]."""

    edges: np.ndarray
    density: np.ndarray

    def __post_init__(self):
        if len(self.edges) != len(self.density) + 1:
            raise ValueError("edge/density length mismatch")
        if np.any(self.density < 0.0):
            raise ValueError("negative density")
        integral = float(np.sum(self.density * np.diff(self.edges)))
        if abs(integral - 1.0) > 1e-9:
            raise ValueError(f"density integrates to {integral}, not 1")


def radial_histogram(samples, bins: int = 100) -> RadialHistogram:
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("empty sample set")
    # radii live in [0,1] up to rounding; clip so no sample falls out
    density, edges = np.histogram(
        np.clip(samples, 0.0, 1.0), bins=bins, range=(0.0, 1.0), density=True
    )
    return RadialHistogram(edges, density)


def relative_entropy(hist: RadialHistogram, q_at: str = "left") -> float:
    """Discrete relative entropy of the histogram against equilibrium.

    Sum of p_i log(p_i / q_i) * width over bins with p_i > 0, with q the
    equilibrium density at the bin's left edge (or midpoint for the
    cross-check variant).  Bin 0 is skipped in both variants: the
    left-edge q vanishes there.
    """
    p = hist.density
    if float(np.sum(p)) == 0.0:
        raise ValueError("empty histogram")
    if q_at == "left":
        pts = hist.edges[:-1]
    elif q_at == "midpoint":
        pts = 0.5 * (hist.edges[:-1] + hist.edges[1:])
    else:
        raise ValueError("q_at must be 'left' or 'midpoint'")
    widths = np.diff(hist.edges)
    q = equilibrium_radial_density(pts)
    total = 0.0
    for i in range(1, len(p)):
        if p[i] > 0.0:
            total += p[i] * math.log(p[i] / q[i]) * widths[i]
    return total


@dataclass(frozen=True)
class EntropySeries:
    times: tuple[float, ...]
    values: tuple[float, ...]


def fit_decay_rate(series: EntropySeries, floor: float = ENTROPY_FLOOR) -> float:
    """Exponential decay rate: minus the least-squares slope of log H
    against t, restricted to points above the noise floor."""
    pts = [(t, math.log(h)) for t, h in zip(series.times, series.values) if h > floor]
    if len(pts) < 3:
        raise InsufficientData(f"only {len(pts)} points above the floor")
    arr = np.array(pts)
    slope = np.polyfit(arr[:, 0], arr[:, 1], 1)[0]
    return -float(slope)


def _fit_window(series: EntropySeries, floor: float = ENTROPY_FLOOR) -> int:
    return sum(1 for h in series.values if h > floor)


MARGINALS = ("sampled", "implied1", "implied2")


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    backend: str
    threads: int
    max_residual: float
    radials: np.ndarray  # (replicas, frames, marginal)
    entropy: dict
    rate: float | None
    fit_points: int

    def histogram(self, frame_index: int, marginal="sampled", bins: int | None = None) -> RadialHistogram:
        if isinstance(marginal, str):
            marginal = MARGINALS.index(marginal)
        return radial_histogram(
            self.radials[:, frame_index, marginal],
            bins if bins is not None else self.config.bins,
        )


def _resolve_backend(requested: str | None):
    if requested in (None, BACKEND):
        return (_ckernel if _ckernel is not None else _py_kernel), BACKEND
    if requested == "python":
        return _py_kernel, "python"
    if requested == "compiled":
        if _ckernel is None:
            raise RuntimeError("compiled kernel not built")
        return _ckernel, "compiled"
    raise ValueError(f"unknown backend {requested!r}")


def _resolve_threads(threads: int | None, backend: str) -> int:
    if threads is None:
        threads = os.cpu_count() or 1 if backend == "compiled" else 1
    cap = os.environ.get("KACGAP_THREADS")
    if cap is not None:
        threads = min(threads, max(1, int(cap)))
    return max(1, int(threads))


def simulate(cfg: SimConfig, backend: str | None = None, threads: int | None = None) -> SimResult:
    """Run the jump chain for every replica and frame.

    Returns the per-frame rescaled radii of all three particles, the
    entropy series of each marginal, and the fitted decay rate of the
    sampled one (None when too few points clear the noise floor).
    """
    kernel, name = _resolve_backend(backend)
    n_threads = _resolve_threads(threads, name)
    frames = np.ascontiguousarray(cfg.frames, dtype=float)
    out = np.empty((cfg.replicas, len(frames), 3))
    init_kind = _INIT_KIND[cfg.initial]

    bounds = np.linspace(0, cfg.replicas, min(n_threads, cfg.replicas) + 1, dtype=int)
    jobs = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

    def run(span):
        lo, hi = span
        return kernel.run_chunk(cfg.seed, lo, hi, cfg.alpha, frames, init_kind, out[lo:hi])

    if name == "compiled" and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=len(jobs)) as pool:
            residuals = list(pool.map(run, jobs))
    else:
        residuals = [run(j) for j in jobs]

    entropy = {}
    for m, key in enumerate(MARGINALS):
        values = tuple(
            relative_entropy(radial_histogram(out[:, fi, m], cfg.bins))
            for fi in range(len(frames))
        )
        entropy[key] = EntropySeries(cfg.frames, values)

    try:
        rate = fit_decay_rate(entropy["sampled"])
    except InsufficientData:
        rate = None
    return SimResult(
        config=cfg,
        backend=name,
        threads=len(jobs),
        max_residual=float(max(residuals)),
        radials=out,
        entropy=entropy,
        rate=rate,
        fit_points=_fit_window(entropy["sampled"]),
    )

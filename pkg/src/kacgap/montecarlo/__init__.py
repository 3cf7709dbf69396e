"""Conjugate-process simulation and entropy-decay estimation."""

from .core import (
    BACKEND,
    DEFAULT_FRAMES,
    ENTROPY_FLOOR,
    EQ_CONST,
    MARGINALS,
    EntropySeries,
    InsufficientData,
    NegativeRate,
    ParticleState,
    RadialHistogram,
    SimConfig,
    SimResult,
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
from ._py_kernel import Xoshiro

__all__ = [
    "BACKEND",
    "DEFAULT_FRAMES",
    "ENTROPY_FLOOR",
    "EQ_CONST",
    "MARGINALS",
    "EntropySeries",
    "InsufficientData",
    "NegativeRate",
    "ParticleState",
    "RadialHistogram",
    "SimConfig",
    "SimResult",
    "Xoshiro",
    "available_backends",
    "backend_name",
    "equilibrium_radial_density",
    "fit_decay_rate",
    "jump_rates",
    "radial_histogram",
    "relative_entropy",
    "sample_initial",
    "simulate",
    "step",
]

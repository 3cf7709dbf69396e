"""Spectral-gap toolkit for the three-particle conjugate Kac process.

Subpackages:
  jacobi      Jacobi polynomial evaluation, norms, three-term coefficients
  kspectrum   eigenvalues kappa_{n,l} of the correlation operator K
  tridiag     symmetric tridiagonal top-eigenvalue solver
  gapbounds   sector bounds, gap assembly, entropy-production constants
  montecarlo  jump-chain simulation and entropy-decay estimation
  cli         command-line entry point
"""

__version__ = "0.1.0"

__all__ = ["jacobi", "kspectrum", "tridiag", "gapbounds", "montecarlo", "cli"]

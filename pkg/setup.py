"""Optional build of the compiled Monte Carlo kernel.

The package is pure Python by default.  When Cython and a C compiler are
available, the jump-chain kernel is compiled; otherwise installation
proceeds without it and the interpreted kernel is used at runtime.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/kacgap/montecarlo/_ckernel.pyx",
        language_level=3,
    )
    for ext in ext_modules:
        # -ffp-contract=off: the kernel must produce bit-identical streams
        # to the interpreted fallback, so FMA contraction is disabled.
        ext.extra_compile_args = ["-O3", "-ffp-contract=off"]
except ImportError:
    pass

setup(ext_modules=ext_modules)

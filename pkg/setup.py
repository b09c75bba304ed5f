import os

from setuptools import Extension, setup

# The compiled kernels are optional: FPTSIM_PURE=1 (or a missing Cython)
# installs the pure-Python fallback only.
ext_modules = []
if not os.environ.get("FPTSIM_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "fptsim._kernels",
                    sources=["src/fptsim/_kernels.pyx"],
                    # -ffp-contract=off: no FMA contraction, so the compiled
                    # kernels reproduce the pure-Python backend bit for bit.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )

setup(ext_modules=ext_modules)

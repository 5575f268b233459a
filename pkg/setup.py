"""Build script for the optional compiled integrator kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), but the compiled kernel is what makes large randomized
steady-state sweeps cheap, so we try to build it and fall back silently if
Cython or a C compiler is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "magpol._kernel",
                sources=["src/magpol/_kernel.pyx"],
                extra_compile_args=["-O3"],
                libraries=["m"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)

"""Build script: compiles the Cython Kalman filter kernel when possible.

If the extension cannot be built (no compiler, no Cython), the package
installs anyway and falls back to the pure-numpy filter at import time.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "aethercast.sarimax._filter",
                sources=["src/aethercast/sarimax/_filter.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"aethercast: skipping Cython kernel build ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)

"""Build script: compiles the optional speedup extension when Cython is available.

The package is fully functional without the extension; `fairform._kernels`
falls back to the pure-Python backend at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "fairform._kernels._speedups",
                ["src/fairform/_kernels/_speedups.pyx"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)

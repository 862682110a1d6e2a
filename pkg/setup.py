"""Build script: compiles the optional orbit-scan extension.

The package works without the extension (a NumPy backend is selected at
import time), so a failed Cython build degrades to a pure-Python install
instead of aborting.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("revivalmap._kernels", ["src/revivalmap/_kernels.pyx"])],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"revivalmap: skipping compiled kernels ({exc!r}); "
          "the NumPy fallback will be used")
    extensions = []

setup(ext_modules=extensions)

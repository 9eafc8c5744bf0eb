"""Build script: compiles the optional RK4 kernel extension.

The package works without the extension (a pure-Python twin of the kernels
is selected at import time), so a failed compilation only costs speed.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "epcharge._kernels_cy",
                ["src/epcharge/_kernels_cy.pyx"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"epcharge: skipping compiled kernels ({exc}); "
          "pure-Python fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules)

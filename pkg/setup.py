"""Build the compiled physics kernels.

The package works without the extension (a pure-Python backend is selected
at import time), so a failed compile only costs speed.
"""

import os

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build-time guard
    numpy = None
    cythonize = None

PYX = "src/foldsim/engine/_kernels.pyx"

ext_modules = []
if cythonize is not None and os.path.exists(PYX):
    extensions = [
        Extension(
            "foldsim.engine._kernels",
            [PYX],
            include_dirs=[numpy.get_include()],
            # -ffp-contract=off keeps the C arithmetic bit-identical to the
            # numpy reference backend (no FMA fusion).
            extra_compile_args=["-O3", "-ffp-contract=off"],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        )
    ]
    ext_modules = cythonize(
        extensions, compiler_directives={"language_level": "3"}
    )

setup(ext_modules=ext_modules)

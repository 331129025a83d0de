"""Build script for the optional compiled sampling kernels.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set FDMIMO_NO_EXT=1 to skip compilation entirely.
-ffp-contract=off keeps the C arithmetic bitwise identical to the numpy
fallback (no fused multiply-add in the accept/reject comparisons).
"""

import os

from setuptools import Extension, setup

extensions = []
if not os.environ.get("FDMIMO_NO_EXT"):
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "fdmimo._kernels",
        ["src/fdmimo/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    extensions = cythonize([ext], language_level=3)

setup(ext_modules=extensions)

"""Build script: compiles the optional fast-kernel extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a failed compile only costs speed.
"""

import numpy
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
                "sparseweak._kernels._ckernels",
                ["src/sparseweak/_kernels/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )

setup(ext_modules=extensions)

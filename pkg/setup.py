import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the NumPy fallback kernels take over at import time
    ext_modules = []
else:
    flags = [] if os.name == "nt" else ["-O2", "-ffp-contract=off"]
    ext_modules = cythonize(
        [
            Extension(
                "refscout._kernels._core",
                ["src/refscout/_kernels/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=flags,
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)

"""Build script: compiles the optional pair-counting extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); set DEGDEP_SKIP_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("DEGDEP_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "degdep.kernels._ckernels",
                    sources=["src/degdep/kernels/_ckernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)

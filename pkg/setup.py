"""Build script for the optional compiled kernels.

The Cython extension is optional: if Cython or a C compiler is missing the
package installs with the pure-Python kernels only.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("FOCKOPTICS_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "fockoptics._kernels",
                    ["src/fockoptics/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

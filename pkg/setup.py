"""Build hooks for the optional compiled kernel.

The package is fully functional without the extension; building it swaps in
the fast BFS/mask kernels (set HIVEFLOW_NO_EXT=1 to skip compilation).
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("HIVEFLOW_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("hiveflow._kernels._fast",
                       ["src/hiveflow/_kernels/_fast.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

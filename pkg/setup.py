"""Build script for the optional compiled LCS kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); set REMAP_SKIP_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("REMAP_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("remap._lcs_c", ["src/remap/_lcs_c.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

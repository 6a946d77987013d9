"""Builds the optional compiled physics kernel.

The package works without it (a pure-Python twin is selected at import time),
so the extension is marked optional and a failed compile does not abort the
install.
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None and os.path.exists("src/arraylab/_simcore.pyx"):
    ext_modules = cythonize(
        [
            Extension(
                "arraylab._simcore",
                ["src/arraylab/_simcore.pyx"],
                optional=True,
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)

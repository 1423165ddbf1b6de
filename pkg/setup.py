"""Build script: compiles the optional exact-reduction kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "nevsmt._kernel._creduce",
                ["src/nevsmt/_kernel/_creduce.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
twin is selected at import time); building it just makes the hot
term-map convolutions faster.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ecalg._kernels_cy",
                ["src/ecalg/_kernels_cy.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)

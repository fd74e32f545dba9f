"""Build script for the optional compiled kernel core.

The package is fully functional without the extension (a pure
numpy fallback is selected at import time), so build failures of
the compiled core are tolerated.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    extensions = cythonize(
        [
            Extension(
                "isrlift._kernels_cy",
                ["src/isrlift/_kernels_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

for ext in extensions:
    ext.optional = True

setup(ext_modules=extensions)

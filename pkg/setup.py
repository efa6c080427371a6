"""Build script for the optional compiled kernels.

The package is pure Python except for the chordal stepping kernels in
``loewner._chordal_kernels``.  Those carry an O(n^2) scalar recurrence that
dominates trace computations, so they are compiled with Cython when a
toolchain is available.  The package falls back to a numpy implementation
at import time if the extension is missing, so a failed build of the
extension is not fatal to the install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "loewner._chordal_kernels",
                sources=["src/loewner/_chordal_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-fno-math-errno"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)

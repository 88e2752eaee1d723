import sys

from setuptools import setup

# The compiled Wolfe kernel is optional: the package falls back to the
# pure-numpy implementation when the extension is unavailable.
ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "flatstab.kernels._wolfe",
                ["src/flatstab/kernels/_wolfe.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    include_dirs = [numpy.get_include()]
except Exception as exc:  # pragma: no cover
    print(f"flatstab: building without compiled kernels ({exc})", file=sys.stderr)
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)

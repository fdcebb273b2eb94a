"""Build script. The Cython core is optional: if it fails to build, the
package falls back to the pure numpy implementation at import time."""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "kdm._core",
                ["src/kdm/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"skipping compiled core ({exc}); pure python fallback will be used")

setup(ext_modules=ext_modules)

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "roothall._kernels.gfcore",
                ["src/roothall/_kernels/gfcore.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-Python kernels are selected at import time when the extension is absent.
    ext_modules = []

setup(ext_modules=ext_modules)

from setuptools import Extension, setup

# The compiled kernel is optional: if Cython (or a C compiler) is missing the
# package falls back to the pure-numpy implementation selected at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mpquot._kernels",
                ["src/mpquot/_kernels.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("COMPOSE_PATTERNS_NO_EXT", "") in ("", "0"):
    ext_modules = cythonize(
        [
            Extension(
                "compose_patterns.kernels._speedups",
                ["src/compose_patterns/kernels/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

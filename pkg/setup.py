"""Build the optional compiled ridge-quadrature kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the NumPy implementation in ``ouschauder._ridge_py``.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("OUSCHAUDER_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "ouschauder._ridge",
                    ["src/ouschauder/_ridge.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"ouschauder: building without compiled kernel ({exc})")

setup(ext_modules=ext_modules)

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("MDSKIT_NO_EXT"):
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        # the pure-Python kernels take over at import time
        return []
    ext = Extension(
        "mdskit._core",
        ["src/mdskit/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions())

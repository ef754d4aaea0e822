import os

from setuptools import Extension, setup

# The compiled stepping core is optional: the package falls back to a
# numpy implementation when the extension is absent or fails to build.
ext_modules = []
if os.environ.get("HHRDNET_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "hhrdnet._kernels",
                    ["src/hhrdnet/_kernels.pyx"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

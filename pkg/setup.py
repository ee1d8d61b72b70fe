import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the pure fallback still works without the extension
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "lapbound._core",
                ["src/lapbound/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)

import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

setup(ext_modules=cythonize(
    [Extension(
        "qks._kernels",
        ["src/qks/_kernels.pyx"],
        extra_compile_args=["-O3"],
        language="c",
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )],
    language_level=3,
))

from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "gameforms._kernels",
        ["src/gameforms/_kernels.pyx"],
    ),
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    ),
    zip_safe=False,
)

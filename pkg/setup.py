from setuptools import Extension, setup

# The compiled kernel is optional: without Cython (or a working compiler)
# the package falls back to the pure-Python kernel at import time.
try:
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    extensions = cythonize(
        [
            Extension(
                "orbifoldcert._ckernel",
                ["src/orbifoldcert/_ckernel.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)

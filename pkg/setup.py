from setuptools import Extension, setup

# The compiled RK4 kernel is optional: spinbatt falls back to a pure-numpy
# integrator if the extension is missing (see spinbatt.meanfield).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "spinbatt._chain_rk4",
                ["src/spinbatt/_chain_rk4.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)

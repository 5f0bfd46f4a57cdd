from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [Extension("hftkyle._kernels", ["src/hftkyle/_kernels.pyx"],
                   extra_compile_args=["-O3"], optional=True)],
        compiler_directives={"language_level": "3"},
    )
else:
    # pure-Python fallback in hftkyle._kernels_py is picked up at import
    ext_modules = []

setup(ext_modules=ext_modules)

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("tmfres.gf2._kernel", ["src/tmfres/gf2/_kernel.pyx"],
                   include_dirs=[numpy.get_include()], extra_compile_args=["-O3"]),
         Extension("tmfres.gf2._sparse", ["src/tmfres/gf2/_sparse.pyx"],
                   language="c++", extra_compile_args=["-O3"])],
        language_level=3, quiet=True)
except Exception as exc:  # the pure-Python backend still works
    print(f"skipping compiled GF(2) kernel: {exc}")

setup(ext_modules=ext_modules)

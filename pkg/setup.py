"""Build hook for the optional compiled kernel.

The package is pure Python plus one Cython extension, opident._kernel._cycore,
that accelerates the hot loops (sparse polynomial arithmetic, pseudo-reduction,
integer Bareiss rank).  If Cython or a C compiler is unavailable the build
falls back to the pure-Python kernel; the package works either way.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/opident/_kernel/_cycore.pyx"],
        language_level=3,
    )
except Exception as exc:  # no Cython, no compiler: ship pure Python
    print(f"opident: building without the compiled kernel ({exc})")
    ext_modules = []

setup(ext_modules=ext_modules)

"""Build script: compiles the fast formula core when Cython and a C
compiler are available, otherwise installs with the pure-Python fallback.
"""

from setuptools import setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/retroplan/_formulas_c.pyx"],
        compiler_directives={
            "language_level": "3",
            "cdivision": True,
            "boundscheck": False,
            "wraparound": False,
        },
    )


setup(ext_modules=extensions())

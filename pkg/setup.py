"""Build script: compiles the optional tree-sampling kernel.

The package is pure Python plus one optional Cython extension
(``votepower._treekernel``).  If Cython or a C compiler is missing the
build falls back to the numpy kernel at import time, so installation
must never fail because of the extension.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    ext = Extension(
        "votepower._treekernel",
        ["src/votepower/_treekernel.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


class optional_build_ext(build_ext):
    """Swallow compiler failures; the pure kernel is always available."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            sys.stderr.write(
                "warning: compiled kernel skipped (%s); using pure-Python kernel\n" % exc
            )

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            sys.stderr.write(
                "warning: %s skipped (%s); using pure-Python kernel\n" % (ext.name, exc)
            )


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})

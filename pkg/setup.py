"""Build hooks for the optional compiled kernel.

The package is pure Python by default; the Cython extension dzw._kernels is a
drop-in accelerator picked up at import time when present.  Build it in place
with

    python setup.py build_ext --inplace

Missing Cython, a missing C compiler, or a failed compile all degrade to the
pure-Python install (set DZW_NO_EXT=1 to skip the attempt entirely).
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"warning: skipping optional extension dzw._kernels ({exc}); "
              "falling back to the pure-Python kernels")


ext_modules = []
if not os.environ.get("DZW_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("dzw._kernels", ["src/dzw/_kernels.pyx"])],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": "3",
            },
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})

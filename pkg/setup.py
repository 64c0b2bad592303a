"""Build script. The compiled graph kernel is optional: if Cython or a C
compiler is unavailable the package installs anyway and falls back to the
pure-Python kernel at import time."""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: skipping compiled kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: skipping {ext.name} ({exc})")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/gritter/_kernels.pyx"],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(
    ext_modules=ext_modules,
    cmdclass={"build_ext": optional_build_ext},
)

"""Build the optional compiled kernels; the package falls back to pure Python without them."""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing or failing
            print(f"warning: compiled kernels not built ({exc}); using pure-Python kernels")

    def build_extension(self, ext):
        # keep sin/cos as separate libm calls: gcc would otherwise fuse them into
        # sincos, which differs from the pure-Python kernels in the last ulp
        if self.compiler.compiler_type == "unix":
            ext.extra_compile_args = list(ext.extra_compile_args) + ["-fno-builtin-sin", "-fno-builtin-cos"]
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name} ({exc}); using pure-Python kernels")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/kninstanton/_ckernels.pyx"],
        compiler_directives={"language_level": 3},
        quiet=True,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

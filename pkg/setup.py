"""Build hook for the optional compiled kernel extension.

The package is pure Python plus one accelerator module; when Cython or a
C compiler is unavailable the build degrades gracefully and the fallback
kernels in exactkit._corepy are used at import time.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print("warning: skipping compiled kernels (%s); "
                  "pure-Python fallback will be used" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            print("warning: failed to build %s (%s); "
                  "pure-Python fallback will be used" % (ext.name, exc))


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [Extension("exactkit._corec", ["src/exactkit/_corec.pyx"])],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

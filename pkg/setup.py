"""Optional compiled decision-diagram kernel.

The package works without it: ``hyperaffine.diagram`` falls back to the
pure-Python kernel when the extension is missing or fails to build.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler or no Cython: keep the fallback
            print(f"warning: compiled kernel not built ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: {ext.name} not built ({exc})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("hyperaffine._diagram_c", ["src/hyperaffine/_diagram_c.pyx"],
                    language="c++", extra_compile_args=["-O3"])
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})

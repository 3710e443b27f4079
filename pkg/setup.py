"""Build script for the optional compiled simulation kernel.

The package is pure Python plus one Cython extension for the Monte Carlo
hot path.  If Cython or a C compiler is unavailable the extension is
skipped and the package falls back to the numpy implementation at import
time, so installation never fails on the extension's account.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that downgrades compile failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            "selacc: compiled simulation kernel not built (%s); "
            "falling back to the pure numpy backend" % (exc,)
        )


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover
        return []
    ext = Extension("selacc._sim_kernel", ["src/selacc/_sim_kernel.pyx"])
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)

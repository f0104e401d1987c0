"""Build the pybind11 extension through the project's CMake tree."""

import os
import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str, sourcedir: str = "") -> None:
        super().__init__(name, sources=[])
        self.sourcedir = os.fspath(Path(sourcedir).resolve())


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        ext_fullpath = Path.cwd() / self.get_ext_fullpath(ext.name)
        ext_fullpath.parent.mkdir(parents=True, exist_ok=True)

        cfg = "Debug" if int(os.environ.get("DEBUG", "0")) else "Release"
        cmake_args = [
            f"-DCMAKE_BUILD_TYPE={cfg}",
            f"-DPython3_EXECUTABLE={sys.executable}",
            "-DPHASEREC_BUILD_TESTS=OFF",
            "-DPHASEREC_BUILD_PYTHON=ON",
        ]

        build_temp = Path(self.build_temp) / ext.name
        build_temp.mkdir(parents=True, exist_ok=True)

        subprocess.run(["cmake", ext.sourcedir, *cmake_args], cwd=build_temp, check=True)
        subprocess.run(
            ["cmake", "--build", ".", "--target", "phaserec_python", "--parallel"],
            cwd=build_temp,
            check=True,
        )

        built = sorted((build_temp / "python" / "phaserec").glob("_core*"))
        if len(built) != 1:
            raise RuntimeError(f"expected exactly one built module, found {built}")
        shutil.copy2(built[0], ext_fullpath)


setup(
    ext_modules=[CMakeExtension("phaserec._core")],
    cmdclass={"build_ext": CMakeBuild},
    zip_safe=False,
)

# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Build the standalone ``lmlab`` executable with PyInstaller.

Runs from any working directory; all paths resolve against the repository
root. The bundled fixtures travel with the binary so ``lmlab homology rp2``
works without a checkout.
"""

import argparse
import logging
import shutil
import subprocess
import sys
from pathlib import Path
from typing import List, Optional

logger = logging.getLogger("build")

ROOT = Path(__file__).resolve().parent.parent
BINARY_NAME = "lmlab"
ENTRY_POINT = ROOT / "main.py"
FIXTURES = Path("src") / "fixtures"
ARTIFACT_DIRS = ("build", "dist")


def binary_path() -> Path:
    suffix = ".exe" if sys.platform == "win32" else ""
    return ROOT / "dist" / f"{BINARY_NAME}{suffix}"


def clean_artifacts() -> None:
    for name in ARTIFACT_DIRS:
        target = ROOT / name
        if target.exists():
            logger.info("Removing %s/", name)
            shutil.rmtree(target)
    spec_file = ROOT / f"{BINARY_NAME}.spec"
    if spec_file.exists():
        spec_file.unlink()
        logger.info("Removed %s", spec_file.name)
    for cache in ROOT.glob("**/__pycache__"):
        if "examples" not in cache.parts:
            shutil.rmtree(cache, ignore_errors=True)


def pyinstaller_args() -> List[str]:
    # --add-data takes SRC;DEST on Windows and SRC:DEST elsewhere
    separator = ";" if sys.platform == "win32" else ":"
    return [
        sys.executable, "-m", "PyInstaller",
        "--noconfirm",
        "--onefile",
        "--console",
        "--name", BINARY_NAME,
        "--workpath", "build",
        "--distpath", "dist",
        "--add-data", f"{FIXTURES}{separator}{FIXTURES}",
        "--collect-submodules", "sympy",
        "--hidden-import", "joblib.externals.loky.backend.popen_loky_posix",
        ENTRY_POINT.name,
    ]


def build(clean: bool = False) -> bool:
    if not ENTRY_POINT.exists():
        logger.error("Entry point %s is missing", ENTRY_POINT)
        return False
    if not (ROOT / FIXTURES).is_dir():
        logger.error("Fixture directory %s is missing", ROOT / FIXTURES)
        return False
    if clean:
        clean_artifacts()

    command = pyinstaller_args()
    logger.info("Building %s", BINARY_NAME)
    logger.debug("Command: %s", " ".join(command))
    try:
        subprocess.run(command, check=True, cwd=ROOT)
    except FileNotFoundError:
        logger.error("PyInstaller is not installed; run: pip install pyinstaller")
        return False
    except subprocess.CalledProcessError as exc:
        logger.error("PyInstaller exited with code %d", exc.returncode)
        return False
    logger.info("Built %s", binary_path())
    return True


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description=f"Build the {BINARY_NAME} executable")
    parser.add_argument("--clean", action="store_true", help="Remove build artifacts before building")
    parser.add_argument("--debug", action="store_true", help="Enable verbose debug logging.")
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.debug else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )
    return 0 if build(clean=args.clean) else 1


if __name__ == "__main__":
    sys.exit(main())

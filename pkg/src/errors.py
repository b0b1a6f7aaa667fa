# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""Exception hierarchy shared by every lab module."""


class LabError(RuntimeError):
    """Base class for all errors raised by the lab."""


class InvalidFaceError(LabError):
    """Raised for non-canonical faces, out-of-range vertices or mixed dimensions."""


class CapExceededError(LabError):
    """Raised when a brute-force or enumeration guard would be exceeded."""


class NotPrimeError(LabError):
    """Raised when a field modulus is not prime."""


class DependentColumnsError(LabError):
    """Raised when a matrix expected to have independent columns does not."""


class ProcessExhaustedError(LabError):
    """Raised when stepping a process that already holds every d-face."""


class ConfigError(LabError):
    """Raised for invalid experiment configuration or malformed input files."""


class AuditViolation(LabError):
    """
    Raised when a checked theorem or invariant fails on a concrete instance.

    A violation is either a bug or a counterexample; callers must never swallow it.
    """

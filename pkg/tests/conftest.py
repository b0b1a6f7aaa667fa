# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

import os
import sys

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.simplex_core import Complex  # noqa: E402

RP2_PATH = os.path.join(ROOT, "src", "fixtures", "rp2.json")
RP2_FACES = [
    (0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
    (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5),
]


@pytest.fixture
def rp2():
    """Six-vertex real projective plane."""
    return Complex.load(RP2_PATH)


@pytest.fixture
def empty_triangle_complex():
    return Complex(4, 2)


@pytest.fixture
def tetrahedron_boundary():
    return Complex.full_skeleton(4, 2)


@pytest.fixture
def matrix_rng():
    return np.random.Generator(np.random.Philox(1234))


def random_dense(rng, max_size=6, entry_bound=3):
    rows = int(rng.integers(1, max_size + 1))
    cols = int(rng.integers(1, max_size + 1))
    return rng.integers(-entry_bound, entry_bound + 1, size=(rows, cols)).tolist()

# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Boundary matrices of a complex with complete (d-1)-skeleton and exact
computation of its top-but-one homology H_{d-1}(Y; Z).

For d = 1 the degree-zero group is the reduced one (the augmentation row of
the empty face plays the role of the lower boundary map), so vanishing means
the graph is connected.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, prod
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from sympy import prevprime

from src.errors import AuditViolation, ConfigError, InvalidFaceError
from src.simplex_core import Complex, Face, boundary_faces, face_rank, iter_faces
from src.zlinalg import (
    Field,
    SparseIntMatrix,
    rank_mod_q,
    rank_rational,
    smith_normal_form,
)

logger = logging.getLogger(__name__)

PRECHECK_PRIMES: Tuple[int, ...] = (2, int(prevprime(2**30)))

FieldSpec = Union[Field, int, None]


@dataclass(frozen=True)
class HomologySummary:
    """H_{d-1}(Y; Z) = Z^free_rank plus the cyclic groups Z/t for t in ``torsion``."""

    free_rank: int
    torsion: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise InvalidFaceError(f"Negative free rank {self.free_rank}")
        for t in self.torsion:
            if t <= 1:
                raise InvalidFaceError(f"Torsion factors must exceed 1, got {t}")
        for left, right in zip(self.torsion, self.torsion[1:]):
            if right % left:
                raise InvalidFaceError(f"Torsion {self.torsion} is not a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_dict(self) -> Dict[str, Any]:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "HomologySummary":
        try:
            return cls(int(payload["free_rank"]), tuple(payload.get("torsion", ())))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed homology summary: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "HomologySummary":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Homology summary is not valid JSON: {exc}") from exc


def _as_field(spec: FieldSpec) -> Field:
    if isinstance(spec, Field):
        return spec
    return Field(spec)


def faces_boundary_matrix(n: int, dim: int, columns: Sequence[Face]) -> SparseIntMatrix:
    """Signed boundary of the given dim-faces; rows are all (dim-1)-faces in colex order."""
    entries: Dict[Tuple[int, int], int] = {}
    for col, face in enumerate(columns):
        if len(face) != dim + 1:
            raise InvalidFaceError(f"Face {face} does not have dimension {dim}")
        for sign, sub in boundary_faces(face):
            entries[(face_rank(sub, n), col)] = sign
    return SparseIntMatrix(comb(n, dim), len(columns), entries)


def boundary_matrix(Y: Complex, dim: Optional[int] = None) -> SparseIntMatrix:
    """
    Boundary map of ``Y`` in dimension ``dim`` (``Y.d`` by default, or ``Y.d - 1``).

    For dim = d the columns are the d-faces of ``Y`` in colex order; for
    dim = d - 1 they are all facets of the complete skeleton.
    """
    dim = Y.d if dim is None else dim
    if dim == Y.d:
        return faces_boundary_matrix(Y.n, dim, Y.faces)
    if dim == Y.d - 1:
        return faces_boundary_matrix(Y.n, dim, list(iter_faces(Y.n, dim)))
    raise InvalidFaceError(f"Boundary dimension must be {Y.d} or {Y.d - 1}, got {dim}")


def coboundary_matrix(Y: Complex) -> SparseIntMatrix:
    """Transpose of the top boundary: rows are d-faces of ``Y``, columns all facets."""
    return boundary_matrix(Y).transpose()


@lru_cache(maxsize=None)
def _kernel_dimension(n: int, d: int, modulus: Optional[int]) -> int:
    lower = faces_boundary_matrix(n, d - 1, list(iter_faces(n, d - 1)))
    if modulus is not None:
        rank = rank_mod_q(lower, modulus)
    else:
        snf = smith_normal_form(lower)
        if snf.torsion:
            raise AuditViolation(
                f"Lower boundary map for n={n}, d={d} has invariant factors {snf.torsion};"
                " its kernel is not a pure subgroup"
            )
        rank = snf.rank
    dimension = comb(n, d) - rank
    logger.debug("Kernel of lower boundary (n=%d, d=%d, field=%s): dim %d", n, d, modulus or "Q", dimension)
    return dimension


def kernel_dimension(n: int, d: int, field: FieldSpec = None) -> int:
    """dim ker of the lower boundary map on the complete skeleton; cached per (n, d, field)."""
    return _kernel_dimension(n, d, _as_field(field).modulus)


def homology(Y: Complex) -> HomologySummary:
    """Exact H_{d-1}(Y; Z) from the Smith normal form of the top boundary map."""
    snf = smith_normal_form(boundary_matrix(Y))
    summary = HomologySummary(kernel_dimension(Y.n, Y.d) - snf.rank, snf.torsion)
    logger.debug("homology(%r) = %s", Y, summary.to_dict())
    return summary


def betti(Y: Complex, field: FieldSpec = None) -> int:
    """dim of H_{d-1}(Y; F) for F the rationals (None) or a prime field."""
    resolved = _as_field(field)
    top = boundary_matrix(Y)
    if resolved.is_rational:
        rank = rank_rational(top)
    else:
        rank = rank_mod_q(top, resolved.modulus)
    return kernel_dimension(Y.n, Y.d, resolved) - rank


def homology_is_zero(Y: Complex) -> bool:
    """
    True iff H_{d-1}(Y; Z) = 0.

    Rank deficiency modulo 2 or modulo a fixed 30-bit prime already rules
    vanishing out; the Smith normal form runs only when both ranks are full.
    """
    target = kernel_dimension(Y.n, Y.d)
    if len(Y) < target:
        return False
    top = boundary_matrix(Y)
    for q in PRECHECK_PRIMES:
        if rank_mod_q(top, q) < target:
            logger.debug("homology_is_zero(%r): rank deficient mod %d", Y, q)
            return False
    snf = smith_normal_form(top)
    return snf.rank == target and not snf.torsion


def top_betti(Y: Complex) -> int:
    """Rank of H_d(Y), the top cycle space: |d-faces| - rank of the top boundary."""
    return len(Y) - rank_rational(boundary_matrix(Y))


def torsion_order(summary: HomologySummary) -> int:
    return prod(summary.torsion)


def torsion_bound_ok(summary: HomologySummary, n: int, d: int) -> bool:
    """|H_{d-1}(Y)_T| <= sqrt(d+1)^C(n-2, d), compared exactly on squares."""
    order = torsion_order(summary)
    return order * order <= (d + 1) ** comb(n - 2, d)


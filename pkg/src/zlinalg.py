# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Exact sparse linear algebra over the integers, prime fields and the rationals.

Integer matrices are stored as ``{(row, col): value}`` maps of Python ints, so
no intermediate entry can overflow. The Smith normal form reduces one pivot at
a time with a minimal-|entry|, minimal-fill pivot rule and can retain the
unimodular transforms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, prod
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import isprime, primefactors

from src.errors import DependentColumnsError, InvalidFaceError, NotPrimeError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]
Row = Dict[int, Any]


@dataclass(frozen=True)
class Field:
    """A prime field Z/qZ, or the rationals when ``modulus`` is None."""

    modulus: Optional[int] = None

    def __post_init__(self) -> None:
        if self.modulus is not None and not isprime(self.modulus):
            raise NotPrimeError(f"Field modulus {self.modulus} is not prime")

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def label(self) -> str:
        return "Q" if self.modulus is None else f"Z/{self.modulus}"

    @classmethod
    def parse(cls, text: Union[str, int]) -> "Field":
        token = str(text).strip()
        if token.upper() in ("Q", "QQ", "0"):
            return cls(None)
        try:
            return cls(int(token))
        except ValueError as exc:
            raise NotPrimeError(f"Cannot read a field from {text!r}") from exc

    def coerce(self, value: Scalar) -> Scalar:
        if self.modulus is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.modulus) % self.modulus
        return value % self.modulus

    def inverse(self, value: Scalar) -> Scalar:
        if self.modulus is None:
            return 1 / Fraction(value)
        return pow(value, -1, self.modulus)

    def nonzero_elements(self) -> range:
        if self.modulus is None:
            raise NotPrimeError("The rationals have no finite element list")
        return range(1, self.modulus)

    def axpy(self, target: Row, source: Mapping[int, Scalar], factor: Scalar) -> None:
        """In place ``target += factor * source`` dropping zero entries."""
        for col, value in source.items():
            updated = target.get(col, 0) + factor * value
            if self.modulus is not None:
                updated %= self.modulus
            if updated:
                target[col] = updated
            else:
                target.pop(col, None)

    def __str__(self) -> str:
        return self.label


RATIONALS = Field(None)


class SparseIntMatrix:
    """Immutable sparse integer matrix; zero entries are never stored."""

    __slots__ = ("rows", "cols", "_entries")

    def __init__(self, rows: int, cols: int, entries: Optional[Mapping[Tuple[int, int], int]] = None):
        if rows < 0 or cols < 0:
            raise InvalidFaceError(f"Matrix shape must be nonnegative, got {rows}x{cols}")
        clean: Dict[Tuple[int, int], int] = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise InvalidFaceError(f"Entry ({r}, {c}) outside a {rows}x{cols} matrix")
            value = int(value)
            if value:
                clean[(r, c)] = value
        self.rows = rows
        self.cols = cols
        self._entries = clean

    @property
    def entries(self) -> Mapping[Tuple[int, int], int]:
        return MappingProxyType(self._entries)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def get(self, row: int, col: int) -> int:
        return self._entries.get((row, col), 0)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]], cols: Optional[int] = None) -> "SparseIntMatrix":
        rows = len(dense)
        width = cols if cols is not None else (len(dense[0]) if rows else 0)
        entries = {}
        for r, line in enumerate(dense):
            if len(line) != width:
                raise InvalidFaceError("Ragged dense matrix")
            for c, value in enumerate(line):
                if value:
                    entries[(r, c)] = value
        return cls(rows, width, entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Mapping[int, int]], cols: int) -> "SparseIntMatrix":
        return cls(len(rows), cols, {(r, c): v for r, row in enumerate(rows) for c, v in row.items()})

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, int]]) -> "SparseIntMatrix":
        return cls(rows, len(columns), {(r, c): v for c, col in enumerate(columns) for r, v in col.items()})

    @classmethod
    def identity(cls, size: int) -> "SparseIntMatrix":
        return cls(size, size, {(i, i): 1 for i in range(size)})

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: Optional[int] = None,
                 cols: Optional[int] = None) -> "SparseIntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        return cls(rows, cols, {(i, i): v for i, v in enumerate(values)})

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), value in self._entries.items():
            dense[r][c] = value
        return dense

    def row_dicts(self) -> List[Dict[int, int]]:
        out: List[Dict[int, int]] = [{} for _ in range(self.rows)]
        for (r, c), value in self._entries.items():
            out[r][c] = value
        return out

    def column_dicts(self) -> List[Dict[int, int]]:
        out: List[Dict[int, int]] = [{} for _ in range(self.cols)]
        for (r, c), value in self._entries.items():
            out[c][r] = value
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self._entries.items()})

    def restrict_columns(self, columns: Sequence[int]) -> "SparseIntMatrix":
        """Submatrix on ``columns`` (renumbered 0..len-1 in the given order)."""
        position = {c: i for i, c in enumerate(columns)}
        return SparseIntMatrix(
            self.rows,
            len(columns),
            {(r, position[c]): v for (r, c), v in self._entries.items() if c in position},
        )

    def hstack(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if other.rows != self.rows:
            raise InvalidFaceError("hstack needs equal row counts")
        entries = dict(self._entries)
        entries.update({(r, c + self.cols): v for (r, c), v in other._entries.items()})
        return SparseIntMatrix(self.rows, self.cols + other.cols, entries)

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise InvalidFaceError(f"Cannot multiply {self.shape} by {other.shape}")
        right_rows = other.row_dicts()
        entries: Dict[Tuple[int, int], int] = {}
        for (r, k), value in self._entries.items():
            for c, other_value in right_rows[k].items():
                entries[(r, c)] = entries.get((r, c), 0) + value * other_value
        return SparseIntMatrix(self.rows, other.cols, entries)

    def __matmul__(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        return self.matmul(other)

    def is_zero(self) -> bool:
        return not self._entries

    def column_norms_squared(self) -> List[int]:
        norms = [0] * self.cols
        for (_, c), value in self._entries.items():
            norms[c] += value * value
        return norms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, frozenset(self._entries.items())))

    def __repr__(self) -> str:
        return f"SparseIntMatrix({self.rows}x{self.cols}, nnz={self.nnz})"


def matrix_dump(M: SparseIntMatrix) -> str:
    """Text dump: header ``rows cols`` then one ``row col value`` line per nonzero."""
    lines = [f"{M.rows} {M.cols}"]
    lines.extend(f"{r} {c} {v}" for (r, c), v in sorted(M.entries.items()))
    return "\n".join(lines) + "\n"


def parse_matrix_dump(text: str) -> SparseIntMatrix:
    lines = [line.split() for line in text.strip().splitlines() if line.strip()]
    if not lines or len(lines[0]) != 2:
        raise InvalidFaceError("Matrix dump must start with a 'rows cols' header")
    rows, cols = (int(x) for x in lines[0])
    entries = {}
    for parts in lines[1:]:
        if len(parts) != 3:
            raise InvalidFaceError(f"Malformed matrix dump line: {' '.join(parts)}")
        r, c, v = (int(x) for x in parts)
        entries[(r, c)] = v
    return SparseIntMatrix(rows, cols, entries)


class EchelonBasis:
    """
    Fully reduced row-echelon basis over a :class:`Field`.

    Each stored row has a 1 at its pivot (its smallest column) and zeros at
    every other pivot column, so reducing a vector is one pass over the pivots
    it touches.
    """

    def __init__(self, field: Field = RATIONALS):
        self.field = field
        self._rows: Dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> List[int]:
        return sorted(self._rows)

    def rows(self) -> List[Row]:
        return [dict(self._rows[p]) for p in self.pivots]

    def has_pivot(self, col: int) -> bool:
        return col in self._rows

    def copy(self) -> "EchelonBasis":
        clone = EchelonBasis(self.field)
        clone._rows = {p: dict(row) for p, row in self._rows.items()}
        return clone

    def _coerce(self, vector: Mapping[int, Scalar]) -> Row:
        coerced = {c: self.field.coerce(v) for c, v in vector.items()}
        return {c: v for c, v in coerced.items() if v}

    def reduce(self, vector: Mapping[int, Scalar]) -> Row:
        """Remainder of ``vector`` modulo the span of the basis."""
        remainder = self._coerce(vector)
        for pivot in [c for c in remainder if c in self._rows]:
            factor = remainder.get(pivot)
            if factor:
                self.field.axpy(remainder, self._rows[pivot], -factor)
        return remainder

    def contains(self, vector: Mapping[int, Scalar]) -> bool:
        return not self.reduce(vector)

    def insert(self, vector: Mapping[int, Scalar]) -> bool:
        """Add ``vector`` to the span; return True when the rank grew."""
        remainder = self.reduce(vector)
        if not remainder:
            return False
        pivot = min(remainder)
        scale = self.field.inverse(remainder[pivot])
        normalized: Row = {}
        self.field.axpy(normalized, remainder, scale)
        for row in self._rows.values():
            factor = row.get(pivot)
            if factor:
                self.field.axpy(row, normalized, -factor)
        self._rows[pivot] = normalized
        return True

    def nullspace(self, ncols: int) -> List[Row]:
        """Basis of the vectors x in ``field^ncols`` with row . x = 0 for every stored row."""
        basis: List[Row] = []
        for free in range(ncols):
            if free in self._rows:
                continue
            vector: Row = {free: self.field.coerce(1)}
            for pivot, row in self._rows.items():
                coeff = row.get(free)
                if coeff:
                    vector[pivot] = self.field.coerce(-coeff)
            basis.append(vector)
        return basis


def field_rank(rows: Iterable[Mapping[int, Scalar]], field: Field = RATIONALS) -> int:
    basis = EchelonBasis(field)
    for row in rows:
        basis.insert(row)
    return basis.rank


@dataclass(frozen=True)
class SmithForm:
    """
    Smith normal form data: invariant factors s1 | s2 | ... | sr (all positive).

    When transforms are retained, ``U @ M @ V`` equals :meth:`diagonal_matrix`.
    """

    invariant_factors: Tuple[int, ...]
    shape: Tuple[int, int]
    U: Optional[SparseIntMatrix] = None
    V: Optional[SparseIntMatrix] = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion(self) -> Tuple[int, ...]:
        return tuple(s for s in self.invariant_factors if s > 1)

    def diagonal_matrix(self) -> SparseIntMatrix:
        return SparseIntMatrix.diagonal(self.invariant_factors, *self.shape)


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) > 0 and g = s*a + t*b."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class _SmithReducer:
    """Working state for one Smith normal form computation."""

    def __init__(self, M: SparseIntMatrix, keep_transforms: bool):
        self.rows: Dict[int, Dict[int, int]] = {r: row for r, row in enumerate(M.row_dicts()) if row}
        self.col_index: Dict[int, set] = {}
        for r, row in self.rows.items():
            for c in row:
                self.col_index.setdefault(c, set()).add(r)
        self.keep = keep_transforms
        self.u_rows: Dict[int, Dict[int, int]] = {}
        self.vt_rows: Dict[int, Dict[int, int]] = {}
        if keep_transforms:
            self.u_rows = {i: {i: 1} for i in range(M.rows)}
            self.vt_rows = {j: {j: 1} for j in range(M.cols)}
        self.operations = 0

    @staticmethod
    def _combine(target: Dict[int, int], source: Mapping[int, int], factor: int) -> None:
        for col, value in source.items():
            updated = target.get(col, 0) + factor * value
            if updated:
                target[col] = updated
            else:
                target.pop(col, None)

    def row_axpy(self, target: int, source: int, factor: int) -> None:
        """row[target] -= factor * row[source]"""
        row = self.rows[target]
        before = set(row)
        self._combine(row, self.rows[source], -factor)
        after = set(row)
        for c in before - after:
            self.col_index[c].discard(target)
        for c in after - before:
            self.col_index.setdefault(c, set()).add(target)
        if not row:
            del self.rows[target]
        if self.keep:
            self._combine(self.u_rows[target], self.u_rows[source], -factor)
        self.operations += 1

    def col_axpy(self, target: int, source: int, factor: int) -> None:
        """col[target] -= factor * col[source]"""
        for r in list(self.col_index.get(source, ())):
            row = self.rows[r]
            updated = row.get(target, 0) - factor * row[source]
            if updated:
                if target not in row:
                    self.col_index.setdefault(target, set()).add(r)
                row[target] = updated
            elif target in row:
                del row[target]
                self.col_index[target].discard(r)
        if self.keep:
            self._combine(self.vt_rows[target], self.vt_rows[source], -factor)
        self.operations += 1

    def choose_pivot(self) -> Tuple[int, int]:
        best: Optional[Tuple[int, int, int, int]] = None
        for r, row in self.rows.items():
            width = len(row) - 1
            for c, value in row.items():
                size = abs(value)
                if best is not None and size > best[0]:
                    continue
                key = (size, width * (len(self.col_index[c]) - 1), r, c)
                if best is None or key < best:
                    best = key
                    if size == 1 and key[1] == 0:
                        return r, c
        assert best is not None
        return best[2], best[3]

    def isolate(self, i: int, j: int) -> Tuple[int, int]:
        """Clear row i and column j except the pivot; the pivot may move to a smaller entry."""
        while True:
            pivot = self.rows[i][j]
            for r in sorted(self.col_index[j] - {i}):
                self.row_axpy(r, i, self.rows[r][j] // pivot)
            if len(self.col_index[j]) > 1:
                i = min(self.col_index[j], key=lambda r: (abs(self.rows[r][j]), len(self.rows[r]), r))
                continue

            for c in sorted(set(self.rows[i]) - {j}):
                self.col_axpy(c, j, self.rows[i][c] // pivot)
            if len(self.rows[i]) > 1:
                j = min(self.rows[i], key=lambda c: (abs(self.rows[i][c]), len(self.col_index[c]), c))
                continue
            return i, j

    def retire(self, i: int, j: int) -> int:
        value = self.rows.pop(i)[j]
        self.col_index.pop(j, None)
        return value

    def transform_pair(self, first: Tuple[int, int], second: Tuple[int, int], a: int, b: int) -> None:
        """Unimodular 2x2 step turning diag(a, b) into diag(gcd, a*b/gcd)."""
        g, s, t = _xgcd(a, b)
        (ia, ja), (ib, jb) = first, second
        u_a, u_b = self.u_rows[ia], self.u_rows[ib]
        new_a: Dict[int, int] = {}
        self._combine(new_a, u_a, s)
        self._combine(new_a, u_b, t)
        new_b: Dict[int, int] = {}
        self._combine(new_b, u_a, -(b // g))
        self._combine(new_b, u_b, a // g)
        self.u_rows[ia], self.u_rows[ib] = new_a, new_b

        v_a, v_b = self.vt_rows[ja], self.vt_rows[jb]
        col_a: Dict[int, int] = {}
        self._combine(col_a, v_a, 1)
        self._combine(col_a, v_b, 1)
        col_b: Dict[int, int] = {}
        self._combine(col_b, v_a, -(t * b // g))
        self._combine(col_b, v_b, s * a // g)
        self.vt_rows[ja], self.vt_rows[jb] = col_a, col_b


def _divisibility_fix(values: List[int], reducer: Optional[_SmithReducer],
                      positions: List[Tuple[int, int]]) -> None:
    """Rewrite diagonal values in place until values[i] divides values[j] for i < j."""
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            a, b = values[i], values[j]
            if b % a == 0:
                continue
            g = gcd(a, b)
            if reducer is not None:
                reducer.transform_pair(positions[i], positions[j], a, b)
            values[i], values[j] = g, a * b // g


def smith_normal_form(M: SparseIntMatrix, keep_transforms: bool = False) -> SmithForm:
    """
    Smith normal form of ``M``.

    Invariant factors are positive and form a divisibility chain; their count
    is the rational rank. With ``keep_transforms`` the unimodular U, V with
    ``U @ M @ V == diag(invariant_factors)`` are returned as well.
    """
    reducer = _SmithReducer(M, keep_transforms)
    positions: List[Tuple[int, int]] = []
    values: List[int] = []
    while reducer.rows:
        i, j = reducer.isolate(*reducer.choose_pivot())
        values.append(reducer.retire(i, j))
        positions.append((i, j))

    _divisibility_fix(values, reducer if keep_transforms else None, positions)
    for k, value in enumerate(values):
        if value < 0:
            values[k] = -value
            if keep_transforms:
                row = reducer.u_rows[positions[k][0]]
                for c in row:
                    row[c] = -row[c]

    logger.debug(
        "SNF of %dx%d matrix (nnz=%d): rank %d, %d elementary operations, torsion %s",
        M.rows, M.cols, M.nnz, len(values), reducer.operations, [v for v in values if v > 1],
    )
    if not keep_transforms:
        return SmithForm(tuple(values), M.shape)

    pivot_rows = [i for i, _ in positions]
    pivot_cols = [j for _, j in positions]
    row_order = pivot_rows + sorted(set(range(M.rows)) - set(pivot_rows))
    col_order = pivot_cols + sorted(set(range(M.cols)) - set(pivot_cols))
    U = SparseIntMatrix.from_rows([reducer.u_rows[i] for i in row_order], M.rows)
    V = SparseIntMatrix.from_columns(M.cols, [reducer.vt_rows[j] for j in col_order])
    return SmithForm(tuple(values), M.shape, U, V)


def rank_mod_q(M: SparseIntMatrix, q: int) -> int:
    """Rank of ``M`` over the field with q elements."""
    field = Field(q)
    rank = field_rank((row for row in M.row_dicts() if row), field)
    logger.debug("rank_mod_q(%r, %d) = %d", M, q, rank)
    return rank


def rank_rational(M: SparseIntMatrix) -> int:
    """
    Exact rank over Q by fraction-free (Bareiss) elimination on sparse rows.

    Every update ``(p * row - f * pivot_row) / previous_pivot`` is an exact
    integer division, so entries stay bounded by the minors of ``M``.
    """
    active = [row for row in M.row_dicts() if row]
    previous = 1
    rank = 0
    while active:
        col = min(min(row) for row in active)
        candidates = [k for k, row in enumerate(active) if col in row]
        chosen = min(candidates, key=lambda k: (abs(active[k][col]), len(active[k]), k))
        pivot_row = active.pop(chosen)
        pivot = pivot_row[col]

        survivors = []
        for row in active:
            factor = row.get(col, 0)
            updated: Dict[int, int] = {}
            for c in set(row) | set(pivot_row):
                value = pivot * row.get(c, 0) - factor * pivot_row.get(c, 0)
                if value:
                    updated[c] = value // previous
            updated.pop(col, None)
            if updated:
                survivors.append(updated)
        active = survivors
        previous = pivot
        rank += 1
    return rank


def cokernel_torsion(M: SparseIntMatrix) -> List[int]:
    """Invariant factors > 1 of ``M``; their product is |coker(M)_T|."""
    return list(smith_normal_form(M).torsion)


def torsion_primes(M: SparseIntMatrix) -> List[int]:
    """Primes dividing some invariant factor of ``M``."""
    primes = set()
    for factor in cokernel_torsion(M):
        primes.update(primefactors(factor))
    return sorted(primes)


def restricted_torsion_check(M: SparseIntMatrix, columns: Sequence[int], d: int) -> Tuple[bool, List[int]]:
    """
    Restrict a coboundary matrix to ``columns`` (a facet set X) and list the
    primes dividing its cokernel torsion. The check passes when every such
    prime q satisfies q^2 <= (d+1)^|X|.
    """
    primes = torsion_primes(M.restrict_columns(columns))
    limit = (d + 1) ** len(columns)
    return all(q * q <= limit for q in primes), primes


def torsion_bound_holds(M: SparseIntMatrix) -> Tuple[bool, int, int]:
    """
    Check |coker(M)_T| <= t^rank_Q(M) where t bounds the Euclidean column norms.

    The comparison is exact on squares: |coker_T|^2 <= (max squared norm)^rank.
    The returned bound uses t rounded up to an integer.
    """
    snf = smith_normal_form(M)
    order = prod(snf.torsion)
    t_squared = max(M.column_norms_squared(), default=0)
    t = isqrt(t_squared)
    if t * t < t_squared:
        t += 1
    holds = order * order <= t_squared ** snf.rank
    if not holds:
        logger.error("Torsion bound violated: |coker_T|=%d, t^2=%d, rank=%d", order, t_squared, snf.rank)
    return holds, order, t ** snf.rank


def complete_to_square(N: SparseIntMatrix) -> SparseIntMatrix:
    """
    Append standard basis columns e_i, smallest i first, each outside the
    current rational span, until the matrix is square and nonsingular.
    """
    if rank_rational(N) != N.cols:
        raise DependentColumnsError(f"Columns of {N!r} are not linearly independent over Q")
    basis = EchelonBasis(RATIONALS)
    columns = N.column_dicts()
    for column in columns:
        basis.insert(column)
    appended = []
    for i in range(N.rows):
        if basis.rank == N.rows:
            break
        if basis.insert({i: 1}):
            appended.append(i)
    logger.debug("complete_to_square appended basis vectors %s", appended)
    return SparseIntMatrix.from_columns(N.rows, columns + [{i: 1} for i in appended])


class KernelTracker:
    """
    Dimension of the kernel of a growing coboundary matrix restricted to a
    fixed column set X.

    Starts at |X| and weakly decreases as rows are pushed.
    """

    def __init__(self, columns: Sequence[int], field: Field = RATIONALS):
        self.columns = tuple(columns)
        self.field = field
        self._local = {c: i for i, c in enumerate(self.columns)}
        self._basis = EchelonBasis(field)
        self.pushed = 0

    @property
    def dimension(self) -> int:
        return len(self.columns) - self._basis.rank

    def push(self, row: Mapping[int, int]) -> int:
        restricted = {self._local[c]: v for c, v in row.items() if c in self._local}
        if restricted:
            self._basis.insert(restricted)
        self.pushed += 1
        return self.dimension

    def kernel_basis(self) -> List[Row]:
        """Basis of the current kernel, as vectors over the tracked columns."""
        return [
            {self.columns[i]: v for i, v in vector.items()}
            for vector in self._basis.nullspace(len(self.columns))
        ]

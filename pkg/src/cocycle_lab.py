# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Cochain-level quantities on the full simplex and on a complex Y: coboundary
size b, weight w, beta and b of a facet set, the large-cocycle event z,
inclusion-minimal cocycle supports, the coisoperimetric audit and the
three-condition checker.

Everything here is exact and exponential. Each search is bounded by a
:class:`Caps` field and raises :class:`CapExceededError` instead of
approximating.

Cochains are vectors over facets. Two subspaces of the cochain space do most
of the work:

* the cocycles of Y supported inside X (kernel of the coboundary of Y
  restricted to the columns X);
* for a facet set T, the cochains congruent modulo coboundaries to something
  supported inside T. A cochain has weight below s exactly when it lies in
  one of these spaces with |T| = s - 1.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field, fields
from functools import lru_cache
from itertools import combinations, product
from math import ceil, comb, inf, isqrt
from types import MappingProxyType
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import numpy as np
from sympy import primerange

from src.errors import AuditViolation, CapExceededError, ConfigError, InvalidFaceError
from src.homology_engine import homology
from src.simplex_core import (
    Complex,
    Face,
    FacetSet,
    boundary_faces,
    canonical_face,
    isolated_facets,
    isolated_pairs_sharing_ridge,
    is_strongly_connected,
    iter_faces,
)
from src.zlinalg import RATIONALS, EchelonBasis, Field, Row, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Caps:
    """Brute-force limits; echoed into every report that relied on them."""

    k_max: int = 4
    support_cap: int = 3
    n_max: int = 7
    coset_cap: int = 10**6
    enum_cap: int = 2 * 10**5
    cond1_facet_cap: int = 10
    candidate_cap: int = 10**5
    rational_multiface_cap: int = 12

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if not isinstance(value, int) or value < 1:
                raise ConfigError(f"Cap {item.name} must be a positive integer, got {value!r}")

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "Caps":
        known = {item.name for item in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"Unknown caps: {sorted(unknown)}")
        return cls(**dict(payload))


DEFAULT_CAPS = Caps()


@dataclass(frozen=True)
class Cochain:
    """A (d-1)-cochain on n vertices: facet -> nonzero field element."""

    n: int
    d: int
    field: Field
    values: Mapping[Face, Scalar] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: Dict[Face, Scalar] = {}
        for face, value in dict(self.values).items():
            face = canonical_face(face, self.n)
            if len(face) != self.d:
                raise InvalidFaceError(f"Cochain entry {face} is not a {self.d - 1}-face")
            coerced = self.field.coerce(value)
            if coerced:
                clean[face] = coerced
        object.__setattr__(self, "values", MappingProxyType(clean))

    @classmethod
    def indicator(cls, n: int, d: int, faces: Sequence[Sequence[int]], field: Field = RATIONALS) -> "Cochain":
        return cls(n, d, field, {tuple(f): 1 for f in faces})

    @property
    def support(self) -> FacetSet:
        return FacetSet(self.n, frozenset(self.values), self.d - 1)

    def is_zero(self) -> bool:
        return not self.values


@dataclass(frozen=True)
class ConditionReport:
    """
    Outcome of the three-condition check on one complex.

    ``cond1`` is None when the large-cocycle sweep was not evaluated.
    """

    cond1: Optional[bool]
    cond2: bool
    cond3: bool
    caps: Caps
    cond1_threshold: int

    @property
    def forces_free_rank(self) -> bool:
        """Conditions 1 and 2 both hold within caps; an unswept cond1 never counts."""
        return self.cond1 is True and self.cond2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cond1": self.cond1,
            "cond2": self.cond2,
            "cond3": self.cond3,
            "cond1_threshold": self.cond1_threshold,
            "caps": self.caps.to_dict(),
        }


class SimplexTables:
    """Index tables for the full simplex on n vertices around dimension d-1."""

    def __init__(self, n: int, d: int):
        if d < 1 or n < d + 1:
            raise InvalidFaceError(f"Need d >= 1 and n >= d + 1, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.facets: List[Face] = list(iter_faces(n, d - 1))
        self.facet_index = {f: i for i, f in enumerate(self.facets)}
        self.ridges: List[Face] = list(iter_faces(n, d - 2))
        ridge_index = {r: i for i, r in enumerate(self.ridges)}
        self.dfaces: List[Face] = list(iter_faces(n, d))
        self.dface_index = {s: i for i, s in enumerate(self.dfaces)}

        self.dface_facets: List[Tuple[Tuple[int, int], ...]] = [
            tuple((self.facet_index[sub], sign) for sign, sub in boundary_faces(face))
            for face in self.dfaces
        ]
        self.facet_dfaces: List[List[int]] = [[] for _ in self.facets]
        for s, members in enumerate(self.dface_facets):
            for f, _ in members:
                self.facet_dfaces[f].append(s)

        # rows of the coboundary from ridges to facets
        self.facet_ridges: List[Dict[int, int]] = [
            {ridge_index[sub]: sign for sign, sub in boundary_faces(facet)} for facet in self.facets
        ]
        self.ridge_facets: List[Dict[int, int]] = [{} for _ in self.ridges]
        for f, row in enumerate(self.facet_ridges):
            for r, sign in row.items():
                self.ridge_facets[r][f] = sign

        self.adjacency: List[Set[int]] = [set() for _ in self.facets]
        for members in self.ridge_facets:
            for f in members:
                self.adjacency[f].update(g for g in members if g != f)

    @property
    def facet_total(self) -> int:
        return len(self.facets)

    def indices(self, X: FacetSet) -> List[int]:
        try:
            return sorted(self.facet_index[f] for f in X.facets)
        except KeyError as exc:
            raise InvalidFaceError(f"Facet {exc.args[0]} is not a {self.d - 1}-face on {self.n} vertices") from exc

    def vector(self, phi: Cochain) -> Row:
        return {self.facet_index[f]: v for f, v in phi.values.items()}

    def complex_cofaces(self, Y: Complex) -> List[List[int]]:
        """For each facet, the indices of the d-faces of ``Y`` containing it."""
        present = {self.dface_index[s] for s in Y.d_faces}
        return [[s for s in cofaces if s in present] for cofaces in self.facet_dfaces]


@lru_cache(maxsize=16)
def simplex_tables(n: int, d: int) -> SimplexTables:
    logger.debug("Building simplex tables for n=%d, d=%d", n, d)
    return SimplexTables(n, d)


def default_fields(d: int, size: int) -> List[Field]:
    """Primes q with q <= sqrt(d+1)^size, followed by the rationals."""
    limit = isqrt((d + 1) ** size)
    return [Field(int(q)) for q in primerange(2, limit + 1)] + [RATIONALS]


def _coboundary_basis(tables: SimplexTables, field: Field) -> EchelonBasis:
    basis = EchelonBasis(field)
    for column in tables.ridge_facets:
        basis.insert(column)
    return basis


@lru_cache(maxsize=64)
def _coboundary_space(n: int, d: int, modulus: Optional[int]) -> EchelonBasis:
    return _coboundary_basis(simplex_tables(n, d), Field(modulus))


@lru_cache(maxsize=128)
def _low_weight_spaces(n: int, d: int, modulus: Optional[int], size: int) -> Tuple[EchelonBasis, ...]:
    """For every facet set T of the given size: span of coboundaries and cochains supported in T."""
    tables = simplex_tables(n, d)
    base = _coboundary_space(n, d, modulus)
    spaces = []
    for T in combinations(range(tables.facet_total), size):
        space = base.copy()
        for f in T:
            space.insert({f: 1})
        spaces.append(space)
    return tuple(spaces)


def _checked_low_weight_spaces(tables: SimplexTables, field: Field, size: int,
                               enum_cap: int) -> Tuple[EchelonBasis, ...]:
    if size < 0:
        return ()
    count = comb(tables.facet_total, size)
    if count > enum_cap:
        raise CapExceededError(f"{count} facet sets of size {size} exceed enum_cap={enum_cap}")
    return _low_weight_spaces(tables.n, tables.d, field.modulus, size)


@lru_cache(maxsize=16)
def _coboundary_table(n: int, d: int, q: int) -> np.ndarray:
    """Every coboundary of a ridge cochain over Z/q, one row per cochain."""
    tables = simplex_tables(n, d)
    incidence = np.zeros((tables.facet_total, len(tables.ridges)), dtype=np.int64)
    for f, row in enumerate(tables.facet_ridges):
        for r, sign in row.items():
            incidence[f, r] = sign
    psis = np.array(list(product(range(q), repeat=len(tables.ridges))), dtype=np.int64)
    return np.mod(psis @ incidence.T, q)


def _exists_outside(space: Sequence[Row], support: Sequence[int], bad: Sequence[EchelonBasis],
                    field: Field, enum_cap: int) -> bool:
    """
    Is some vector of span(space) nonzero on every index of ``support`` and
    outside every subspace in ``bad``?

    A vector space over a field with more than k elements is never a union of
    k proper subspaces, so enumeration is only needed over small prime fields
    with many excluded subspaces.
    """
    if not space:
        return False
    for f in support:
        if all(not vector.get(f) for vector in space):
            return False
    proper = []
    for subspace in bad:
        if all(subspace.contains(vector) for vector in space):
            return False
        proper.append(subspace)

    if field.is_rational or len(support) + len(proper) <= field.modulus:
        return True

    q = field.modulus
    total = q ** len(space)
    if total > enum_cap:
        raise CapExceededError(f"Enumerating {total} cochains over {field} exceeds enum_cap={enum_cap}")
    for coeffs in product(range(q), repeat=len(space)):
        vector: Row = {}
        for c, basis_vector in zip(coeffs, space):
            if c:
                field.axpy(vector, basis_vector, c)
        if any(not vector.get(f) for f in support):
            continue
        if not any(subspace.contains(vector) for subspace in proper):
            return True
    return False


def _cocycle_space(tables: SimplexTables, cofaces: List[List[int]], X_idx: Sequence[int],
                   field: Field) -> List[Row]:
    """Basis of the cocycles of the complex supported inside ``X_idx``."""
    local = {f: i for i, f in enumerate(X_idx)}
    touched = sorted({s for f in X_idx for s in cofaces[f]})
    basis = EchelonBasis(field)
    for s in touched:
        basis.insert({local[f]: sign for f, sign in tables.dface_facets[s] if f in local})
    return [{X_idx[i]: v for i, v in vector.items()} for vector in basis.nullspace(len(X_idx))]


def _is_closed(tables: SimplexTables, cofaces: List[List[int]], members: Set[int]) -> bool:
    """No d-face of the complex meets ``members`` in exactly one facet."""
    counts: Dict[int, int] = {}
    for f in members:
        for s in cofaces[f]:
            counts[s] = counts.get(s, 0) + 1
    return all(c != 1 for c in counts.values())


def coboundary_values(phi: Cochain) -> Dict[Face, Scalar]:
    """Nonzero entries of the coboundary of ``phi`` over the full simplex."""
    tables = simplex_tables(phi.n, phi.d)
    vector = tables.vector(phi)
    touched = sorted({s for f in vector for s in tables.facet_dfaces[f]})
    out: Dict[Face, Scalar] = {}
    for s in touched:
        total = phi.field.coerce(sum(sign * vector.get(f, 0) for f, sign in tables.dface_facets[s]))
        if total:
            out[tables.dfaces[s]] = total
    return out


def b_of_cochain(phi: Cochain) -> int:
    """Number of d-faces of the full simplex where the coboundary of ``phi`` is nonzero."""
    if phi.is_zero():
        return 0
    return len(coboundary_values(phi))


def weight(phi: Cochain, coset_cap: int = DEFAULT_CAPS.coset_cap,
           enum_cap: int = DEFAULT_CAPS.enum_cap) -> int:
    """
    Minimum support size over ``phi`` plus coboundaries of (d-2)-cochains.

    Small prime fields enumerate the whole coboundary group; otherwise the
    smallest facet set T with phi congruent to a cochain supported in T is
    searched by increasing |T|.
    """
    if phi.is_zero():
        return 0
    tables = simplex_tables(phi.n, phi.d)
    vector = tables.vector(phi)
    q = phi.field.modulus
    if q is not None and q ** len(tables.ridges) <= coset_cap:
        dense = np.zeros(tables.facet_total, dtype=np.int64)
        for f, v in vector.items():
            dense[f] = v
        shifted = np.mod(dense[np.newaxis, :] - _coboundary_table(phi.n, phi.d, q), q)
        return int(np.count_nonzero(shifted, axis=1).min())

    for size in range(len(vector)):
        for space in _checked_low_weight_spaces(tables, phi.field, size, enum_cap):
            if space.contains(vector):
                return size
    return len(vector)


def beta_of_set(X: FacetSet) -> int:
    """Number of d-faces containing exactly one facet of ``X``."""
    if not X.facets:
        return 0
    tables = simplex_tables(X.n, X.dim + 1)
    members = set(tables.indices(X))
    counts: Dict[int, int] = {}
    for f in members:
        for s in tables.facet_dfaces[f]:
            counts[s] = counts.get(s, 0) + 1
    return sum(1 for c in counts.values() if c == 1)


def _b_of_set_over(X_idx: List[int], tables: SimplexTables, field: Field, caps: Caps) -> Union[int, float]:
    members = set(X_idx)
    counts: Dict[int, int] = {}
    for f in X_idx:
        for s in tables.facet_dfaces[f]:
            counts[s] = counts.get(s, 0) + 1
    beta = sum(1 for c in counts.values() if c == 1)
    multi = sorted(s for s, c in counts.items() if c > 1)
    if len(multi) > caps.rational_multiface_cap:
        raise CapExceededError(
            f"{len(multi)} multi-facet faces exceed rational_multiface_cap={caps.rational_multiface_cap}"
        )
    bad = _checked_low_weight_spaces(tables, field, len(X_idx) - 1, caps.enum_cap)
    local = {f: i for i, f in enumerate(X_idx)}
    forms = {
        s: {local[f]: sign for f, sign in tables.dface_facets[s] if f in members}
        for s in multi
    }

    for size in range(len(multi), -1, -1):
        for zeros in combinations(multi, size):
            basis = EchelonBasis(field)
            for s in zeros:
                basis.insert(forms[s])
            space = [{X_idx[i]: v for i, v in vector.items()} for vector in basis.nullspace(len(X_idx))]
            if _exists_outside(space, X_idx, bad, field, caps.enum_cap):
                return beta + len(multi) - size
    return inf


def b_of_set(X: FacetSet, fields_list: Optional[Sequence[Field]] = None,
             caps: Caps = DEFAULT_CAPS) -> Union[int, float]:
    """
    Infimum of b(phi) over cochains phi with support exactly X and weight |X|,
    across ``fields_list`` (default: the admissible fields for |X|).

    Returns ``math.inf`` when no field carries such a cochain.
    """
    if not X.facets:
        return 0
    d = X.dim + 1
    if X.n > caps.n_max:
        raise CapExceededError(f"b_of_set needs n <= {caps.n_max}, got {X.n}")
    tables = simplex_tables(X.n, d)
    X_idx = tables.indices(X)
    candidates = list(fields_list) if fields_list is not None else default_fields(d, len(X_idx))
    best: Union[int, float] = inf
    for fld in candidates:
        best = min(best, _b_of_set_over(X_idx, tables, fld, caps))
    return best


def z_holds(X: FacetSet, Y: Complex, fields_list: Optional[Sequence[Field]] = None,
            caps: Caps = DEFAULT_CAPS) -> bool:
    """
    True iff some listed field carries a cocycle of ``Y`` of weight |X|
    supported exactly on ``X``.
    """
    if X.n != Y.n or (X.facets and X.dim != Y.d - 1):
        raise InvalidFaceError("Facet set and complex disagree on n or dimension")
    if not X.facets:
        return False
    if Y.n > caps.n_max:
        raise CapExceededError(f"z_holds needs n <= {caps.n_max}, got {Y.n}")
    tables = simplex_tables(Y.n, Y.d)
    cofaces = tables.complex_cofaces(Y)
    X_idx = tables.indices(X)
    if not _is_closed(tables, cofaces, set(X_idx)):
        return False
    candidates = list(fields_list) if fields_list is not None else default_fields(Y.d, len(X_idx))
    for fld in candidates:
        space = _cocycle_space(tables, cofaces, X_idx, fld)
        if not space:
            continue
        bad = _checked_low_weight_spaces(tables, fld, len(X_idx) - 1, caps.enum_cap)
        if _exists_outside(space, X_idx, bad, fld, caps.enum_cap):
            logger.debug("z holds for |X|=%d over %s", len(X_idx), fld)
            return True
    return False


@lru_cache(maxsize=64)
def _coboundary_rank(n: int, d: int, modulus: Optional[int]) -> int:
    return _coboundary_space(n, d, modulus).rank


class _MinimalSupportSearch:
    """Inclusion-minimal supports of cocycles of Y that are not coboundaries."""

    def __init__(self, Y: Complex, field: Field, k_max: int, caps: Caps):
        self.Y = Y
        self.field = field
        self.k_max = k_max
        self.caps = caps
        self.tables = simplex_tables(Y.n, Y.d)
        self.cofaces = self.tables.complex_cofaces(Y)
        self.full_rank = _coboundary_rank(Y.n, Y.d, field.modulus)
        self._nontrivial: Dict[FrozenSet[int], bool] = {}

    def nontrivial(self, S: FrozenSet[int]) -> bool:
        """Some cocycle supported inside S is not a coboundary."""
        if not S:
            return False
        cached = self._nontrivial.get(S)
        if cached is not None:
            return cached
        members = sorted(S)
        cocycles = len(_cocycle_space(self.tables, self.cofaces, members, self.field))
        outside = EchelonBasis(self.field)
        for f in range(self.tables.facet_total):
            if f not in S:
                outside.insert(self.tables.facet_ridges[f])
        coboundaries = self.full_rank - outside.rank
        result = cocycles > coboundaries
        self._nontrivial[S] = result
        return result

    def _unsatisfied_options(self, T: FrozenSet[int], root: int) -> Optional[List[int]]:
        counts: Dict[int, int] = {}
        for f in T:
            for s in self.cofaces[f]:
                counts[s] = counts.get(s, 0) + 1
        best: Optional[List[int]] = None
        for s in sorted(s for s, c in counts.items() if c == 1):
            options = [f for f, _ in self.tables.dface_facets[s] if f not in T and f > root]
            if best is None or len(options) < len(best):
                best = options
                if not options:
                    break
        return best

    def closed_candidates(self) -> Iterator[FrozenSet[int]]:
        """
        Every closed facet set of size <= k_max that could be a minimal support.

        Grows a set from its smallest facet; while some face of Y meets the
        set in a single facet, one of that face's other facets must join.
        Closed sets grow along ridge adjacency only while they are still
        trivial, since a superset of a nontrivial set is never minimal.
        """
        seen: Set[FrozenSet[int]] = set()
        stack = [frozenset([root]) for root in reversed(range(self.tables.facet_total))]
        while stack:
            T = stack.pop()
            if T in seen:
                continue
            seen.add(T)
            if len(seen) > self.caps.candidate_cap:
                raise CapExceededError(f"Cocycle support search exceeded candidate_cap={self.caps.candidate_cap}")
            root = min(T)
            options = self._unsatisfied_options(T, root)
            if options is not None:
                if len(T) < self.k_max:
                    stack.extend(T | {g} for g in reversed(options))
                continue
            yield T
            if len(T) < self.k_max and not self.nontrivial(T):
                frontier = sorted({g for f in T for g in self.tables.adjacency[f] if g > root} - T)
                stack.extend(T | {g} for g in reversed(frontier))

    def run(self) -> List[FrozenSet[int]]:
        minimal = []
        for T in self.closed_candidates():
            if self.nontrivial(T) and not any(self.nontrivial(T - {f}) for f in T):
                minimal.append(T)
        return sorted(minimal, key=lambda S: (len(S), sorted(S)))


def minimal_cocycle_supports(Y: Complex, field: Field = RATIONALS, k_max: Optional[int] = None,
                             caps: Caps = DEFAULT_CAPS) -> List[FacetSet]:
    """
    All inclusion-minimal supports of size <= k_max of cocycles of ``Y`` that
    are not coboundaries, over ``field``.
    """
    k_max = caps.k_max if k_max is None else k_max
    search = _MinimalSupportSearch(Y, field, k_max, caps)
    supports = []
    for S in search.run():
        facet_set = FacetSet(Y.n, frozenset(search.tables.facets[f] for f in S), Y.d - 1)
        if not is_strongly_connected(facet_set):
            logger.error("Minimal cocycle support %s is not strongly connected", facet_set.ordered())
            raise AuditViolation(f"Minimal cocycle support {facet_set.ordered()} is not strongly connected")
        supports.append(facet_set)
    logger.debug("Found %d minimal cocycle supports over %s (k_max=%d)", len(supports), field, k_max)
    return supports


def cond1_threshold(n: int, d: int) -> int:
    return max(1, ceil(n / (3 * d)))


def _large_cocycle_absent(Y: Complex, caps: Caps) -> Optional[bool]:
    tables = simplex_tables(Y.n, Y.d)
    if tables.facet_total > caps.cond1_facet_cap:
        return None
    cofaces = tables.complex_cofaces(Y)
    threshold = cond1_threshold(Y.n, Y.d)
    try:
        for size in range(threshold, tables.facet_total + 1):
            for X_idx in combinations(range(tables.facet_total), size):
                if not _is_closed(tables, cofaces, set(X_idx)):
                    continue
                X = FacetSet(Y.n, frozenset(tables.facets[f] for f in X_idx), Y.d - 1)
                if z_holds(X, Y, caps=caps):
                    logger.debug("Large cocycle on %s", X.ordered())
                    return False
    except CapExceededError as exc:
        logger.debug("Large-cocycle sweep not evaluated: %s", exc)
        return None
    return True


def check_conditions(Y: Complex, caps: Caps = DEFAULT_CAPS) -> ConditionReport:
    """
    Evaluate the three sufficient conditions on ``Y``.

    cond3 is exact. cond2 is exact for supports of size 2..k_max over the
    admissible fields for k_max. cond1 is swept only when every facet subset
    can be visited, and is None otherwise.
    """
    if Y.d >= 2:
        cond3 = not isolated_pairs_sharing_ridge(Y)
    else:
        # every two vertices meet in the empty face
        cond3 = len(isolated_facets(Y)) < 2

    cond2 = True
    for fld in default_fields(Y.d, caps.k_max):
        if any(len(S) >= 2 for S in minimal_cocycle_supports(Y, fld, caps.k_max, caps)):
            cond2 = False
            break

    report = ConditionReport(_large_cocycle_absent(Y, caps), cond2, cond3, caps, cond1_threshold(Y.n, Y.d))
    logger.debug("Conditions for %r: %s", Y, report.to_dict())
    return report


def deterministic_rank_check(Y: Complex, caps: Caps = DEFAULT_CAPS,
                             conditions: Optional[ConditionReport] = None) -> bool:
    """
    True iff H_{d-1}(Y) is free of rank equal to the number of isolated facets.

    When the conditions hold within caps and the claim fails, the complex is
    a counterexample and :class:`AuditViolation` is raised.
    """
    summary = homology(Y)
    isolated = len(isolated_facets(Y))
    holds = not summary.torsion and summary.free_rank == isolated
    if holds:
        return True
    report = conditions if conditions is not None else check_conditions(Y, caps)
    if report.forces_free_rank:
        logger.error("Rank structure fails on %r: %s vs %d isolated (%s)", Y, summary.to_dict(), isolated,
                     report.to_dict())
        raise AuditViolation(
            f"Conditions hold but H_(d-1) = {summary.to_dict()} with {isolated} isolated facets"
        )
    return False


def _cochains_on(X_idx: Sequence[int], field: Field) -> Iterator[Tuple[int, ...]]:
    """Value tuples on X with the first value scaled to 1."""
    for rest in product(field.nonzero_elements(), repeat=len(X_idx) - 1):
        yield (1,) + rest


def coiso_audit_records(n: int, d: int, field: Field, support_cap: int,
                        caps: Caps = DEFAULT_CAPS) -> Iterator[Dict[str, Any]]:
    """
    One record per cochain of support size <= ``support_cap`` whose weight
    equals its support size, checking beta(X) <= b(X) <= b(phi) and both
    coisoperimetric lower bounds.
    """
    if field.is_rational:
        raise ConfigError("The coisoperimetric audit enumerates cochains and needs a prime field")
    if n > caps.n_max:
        raise CapExceededError(f"coiso audit needs n <= {caps.n_max}, got {n}")
    tables = simplex_tables(n, d)
    for size in range(1, support_cap + 1):
        for X_idx in combinations(range(tables.facet_total), size):
            X = FacetSet(n, frozenset(tables.facets[f] for f in X_idx), d - 1)
            beta = beta_of_set(X)
            b_set = b_of_set(X, [field], caps)
            for values in _cochains_on(X_idx, field):
                phi = Cochain(n, d, field, {tables.facets[f]: v for f, v in zip(X_idx, values)})
                w = weight(phi, caps.coset_cap, caps.enum_cap)
                if w != size:
                    continue
                b_phi = b_of_cochain(phi)
                ok = (
                    beta <= b_set <= b_phi
                    and b_phi * (d + 1) >= n * w
                    and b_set * (d + 1) >= n * size
                )
                yield {
                    "support": [list(f) for f in X.ordered()],
                    "values": list(values),
                    "beta": beta,
                    "b_set": b_set,
                    "b_min_cochain": b_phi,
                    "weight": w,
                    "bound": n * w / (d + 1),
                    "ok": ok,
                }


def coiso_audit(n: int, d: int, field: Field, support_cap: int, caps: Caps = DEFAULT_CAPS) -> bool:
    """True iff no enumerated cochain violates b(phi) >= n w(phi) / (d+1) or the b(X) chain."""
    violations = 0
    checked = 0
    for record in coiso_audit_records(n, d, field, support_cap, caps):
        checked += 1
        if not record["ok"]:
            violations += 1
            logger.error("Coisoperimetric violation: %s", record)
    logger.info("Coisoperimetric audit n=%d d=%d over %s: %d cochains, %d violations",
                n, d, field, checked, violations)
    return violations == 0

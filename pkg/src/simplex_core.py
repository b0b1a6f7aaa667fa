# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Faces, d-complexes with complete (d-1)-skeleton, and the combinatorial
predicates built on them: isolated facets, ridge adjacency, dual graphs and
strong connectivity.

A face is a strictly increasing tuple of vertex indices. Faces of one
dimension are ordered colexicographically, and the colex rank is the face
index used for matrix rows/columns and for permutation streams.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from math import comb
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx

from src.errors import CapExceededError, ConfigError, InvalidFaceError
from src.union_find import UnionFind

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]
DualGraph = nx.Graph

ENUMERATION_MAX_N = 8
ENUMERATION_MAX_K = 6


def canonical_face(vertices: Iterable[int], n: Optional[int] = None) -> Face:
    """Return ``vertices`` as a face, rejecting unsorted, repeated or out-of-range input."""
    face = tuple(int(v) for v in vertices)
    for left, right in zip(face, face[1:]):
        if left >= right:
            raise InvalidFaceError(f"Face {face} is not strictly increasing")
    if face and face[0] < 0:
        raise InvalidFaceError(f"Face {face} has a negative vertex")
    if n is not None and face and face[-1] >= n:
        raise InvalidFaceError(f"Face {face} has a vertex outside [0, {n})")
    return face


def colex_key(face: Face) -> Face:
    """Sort key realising colexicographic order among faces of equal size."""
    return face[::-1]


def face_count(n: int, dim: int) -> int:
    """Number of dim-faces of the simplex on n vertices (1 for the empty face)."""
    return comb(n, dim + 1)


def face_rank(face: Sequence[int], n: int) -> int:
    """Colex rank of ``face`` among faces of its dimension on ``n`` vertices."""
    face = canonical_face(face, n)
    return sum(comb(v, i + 1) for i, v in enumerate(face))


def face_unrank(rank: int, dim: int, n: int) -> Face:
    """Inverse of :func:`face_rank`."""
    size = dim + 1
    total = comb(n, size)
    if not 0 <= rank < total:
        raise InvalidFaceError(f"Rank {rank} outside [0, {total}) for dim {dim}, n={n}")

    vertices: List[int] = []
    remaining = rank
    upper = n - 1
    for i in range(size, 0, -1):
        v = upper
        while comb(v, i) > remaining:
            v -= 1
        vertices.append(v)
        remaining -= comb(v, i)
        upper = v - 1
    return tuple(reversed(vertices))


def iter_faces(n: int, dim: int) -> Iterator[Face]:
    """Yield every dim-face on ``n`` vertices in colex order."""
    size = dim + 1
    if size < 0 or size > n:
        return
    if size == 0:
        yield ()
        return
    for top in range(size - 1, n):
        for rest in iter_faces(top, dim - 1):
            yield rest + (top,)


def boundary_faces(face: Face) -> List[Tuple[int, Face]]:
    """Signed codimension-one faces ``(sign, face minus vertex i)`` with sign (-1)^i."""
    return [
        (1 if i % 2 == 0 else -1, face[:i] + face[i + 1:])
        for i in range(len(face))
    ]


def cofaces(face: Face, n: int) -> List[Face]:
    """Faces of one dimension higher containing ``face``."""
    present = set(face)
    return [
        tuple(sorted(face + (v,)))
        for v in range(n)
        if v not in present
    ]


class Complex:
    """
    A d-complex on ``n`` vertices with complete (d-1)-skeleton.

    Only the d-faces are stored; lower faces are implicit. Insertion is
    single-writer; readers only see whole faces.
    """

    def __init__(self, n: int, d: int, faces: Iterable[Iterable[int]] = ()):
        if d < 1:
            raise InvalidFaceError(f"Top dimension must be at least 1, got {d}")
        if n < 0:
            raise InvalidFaceError(f"Vertex count must be nonnegative, got {n}")
        self._n = n
        self._d = d
        self._faces: Set[Face] = set()
        self._ordered: Optional[List[Face]] = None
        for face in faces:
            self.add_face(face)

    @property
    def n(self) -> int:
        return self._n

    @property
    def d(self) -> int:
        return self._d

    @property
    def d_faces(self) -> FrozenSet[Face]:
        return frozenset(self._faces)

    @property
    def faces(self) -> List[Face]:
        """d-faces in colex order."""
        if self._ordered is None:
            self._ordered = sorted(self._faces, key=colex_key)
        return list(self._ordered)

    def add_face(self, vertices: Iterable[int]) -> bool:
        """Insert a d-face; return False when it was already present."""
        face = canonical_face(vertices, self._n)
        if len(face) != self._d + 1:
            raise InvalidFaceError(f"Face {face} does not have dimension {self._d}")
        if face in self._faces:
            return False
        self._faces.add(face)
        self._ordered = None
        return True

    def copy(self) -> "Complex":
        clone = Complex(self._n, self._d)
        clone._faces = set(self._faces)
        return clone

    def facet_count(self) -> int:
        return face_count(self._n, self._d - 1)

    def __len__(self) -> int:
        return len(self._faces)

    def __contains__(self, face: object) -> bool:
        return face in self._faces

    def __iter__(self) -> Iterator[Face]:
        return iter(self.faces)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return (self._n, self._d, self._faces) == (other._n, other._d, other._faces)

    def __repr__(self) -> str:
        return f"Complex(n={self._n}, d={self._d}, faces={len(self._faces)})"

    @classmethod
    def full_skeleton(cls, n: int, d: int) -> "Complex":
        return cls(n, d, iter_faces(n, d))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self._n, "d": self._d, "faces": [list(f) for f in self.faces]}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Complex":
        try:
            n = int(payload["n"])
            d = int(payload["d"])
            faces = payload["faces"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"Malformed complex payload: {exc}") from exc
        if not isinstance(faces, list):
            raise ConfigError("Complex payload 'faces' must be a list")
        return cls(n, d, faces)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Complex":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Complex file is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError("Complex JSON must be an object")
        return cls.from_dict(payload)

    @classmethod
    def load(cls, path: str) -> "Complex":
        logger.debug("Loading complex from %s", path)
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return cls.from_json(handle.read())
        except OSError as exc:
            raise ConfigError(f"Cannot read complex file {path}: {exc}") from exc


@dataclass(frozen=True)
class FacetSet:
    """A set of equal-dimension faces on ``n`` vertices (a facet support X)."""

    n: int
    facets: FrozenSet[Face] = field(default_factory=frozenset)
    dim: Optional[int] = None

    def __post_init__(self) -> None:
        dims = {len(f) - 1 for f in self.facets}
        if len(dims) > 1:
            raise InvalidFaceError(f"FacetSet mixes dimensions {sorted(dims)}")
        for face in self.facets:
            canonical_face(face, self.n)
        if dims:
            (found,) = dims
            if self.dim is not None and self.dim != found:
                raise InvalidFaceError(f"FacetSet declared dim {self.dim} but holds dim {found}")
            object.__setattr__(self, "dim", found)

    @classmethod
    def of(cls, n: int, facets: Iterable[Iterable[int]], dim: Optional[int] = None) -> "FacetSet":
        return cls(n, frozenset(canonical_face(f, n) for f in facets), dim)

    def ordered(self) -> List[Face]:
        return sorted(self.facets, key=colex_key)

    def __len__(self) -> int:
        return len(self.facets)

    def __iter__(self) -> Iterator[Face]:
        return iter(self.ordered())

    def __contains__(self, face: object) -> bool:
        return face in self.facets


def covered_facets(Y: Complex) -> Set[Face]:
    covered: Set[Face] = set()
    for face in Y.d_faces:
        covered.update(sub for _, sub in boundary_faces(face))
    return covered


def isolated_facets(Y: Complex) -> FacetSet:
    """(d-1)-faces of the complete skeleton contained in no d-face of ``Y``."""
    covered = covered_facets(Y)
    isolated = [f for f in iter_faces(Y.n, Y.d - 1) if f not in covered]
    logger.debug("Complex %r has %d isolated facets", Y, len(isolated))
    return FacetSet(Y.n, frozenset(isolated), Y.d - 1)


def isolated_pairs_sharing_ridge(Y: Complex) -> List[Tuple[Face, Face]]:
    """Unordered pairs of isolated facets meeting in a ridge, sorted by colex rank."""
    if Y.d < 2:
        raise InvalidFaceError("Ridge adjacency needs d >= 2")
    buckets: Dict[Face, List[Face]] = defaultdict(list)
    for facet in isolated_facets(Y).facets:
        for _, ridge in boundary_faces(facet):
            buckets[ridge].append(facet)

    pairs = set()
    for members in buckets.values():
        members.sort(key=colex_key)
        for i, left in enumerate(members):
            for right in members[i + 1:]:
                pairs.add((left, right))
    return sorted(pairs, key=lambda pair: (colex_key(pair[0]), colex_key(pair[1])))


def _as_faces(faces: Union[FacetSet, Complex, Iterable[Iterable[int]]]) -> List[Face]:
    if isinstance(faces, Complex):
        return faces.faces
    if isinstance(faces, FacetSet):
        return faces.ordered()
    collected = [canonical_face(f) for f in faces]
    dims = {len(f) for f in collected}
    if len(dims) > 1:
        raise InvalidFaceError(f"Faces of mixed dimensions: sizes {sorted(dims)}")
    return sorted(set(collected), key=colex_key)


def _subface_buckets(faces: Sequence[Face]) -> Dict[Face, List[Face]]:
    buckets: Dict[Face, List[Face]] = defaultdict(list)
    for face in faces:
        for _, sub in boundary_faces(face):
            buckets[sub].append(face)
    return buckets


def dual_graph(faces: Union[FacetSet, Complex, Iterable[Iterable[int]]]) -> DualGraph:
    """
    Graph on equal-dimension faces, with an edge whenever two faces share a
    codimension-one face. Nodes are inserted in colex order.
    """
    ordered = _as_faces(faces)
    graph = nx.Graph()
    graph.add_nodes_from(ordered)
    for members in _subface_buckets(ordered).values():
        for i, left in enumerate(members):
            for right in members[i + 1:]:
                graph.add_edge(left, right)
    logger.debug("Dual graph: %d nodes, %d edges", graph.number_of_nodes(), graph.number_of_edges())
    return graph


def is_strongly_connected(faces: Union[FacetSet, Complex, Iterable[Iterable[int]]]) -> bool:
    """True iff the dual graph of ``faces`` is connected."""
    ordered = _as_faces(faces)
    if not ordered:
        raise InvalidFaceError("Strong connectivity is undefined for an empty face set")
    uf = UnionFind()
    for face in ordered:
        uf.add(face)
    for members in _subface_buckets(ordered).values():
        head = members[0]
        for other in members[1:]:
            uf.union(head, other)
    return uf.components == 1


def strong_count_bound(n: int, d: int, k: int) -> int:
    """Closed-form bound n^(d+k-1) (2d)^k on strongly-connected sets of k (d-1)-faces."""
    return n ** (d + k - 1) * (2 * d) ** k


def spanning_tree_bound(n: int, d: int, k: int) -> int:
    """Rooted-subtree count C(n,d) 2^(k-1) (dn)^(k-1) that the closed form relaxes."""
    return comb(n, d) * 2 ** (k - 1) * (d * n) ** (k - 1)


def _skeleton_neighbours(n: int, facet_dim: int) -> List[Set[int]]:
    size = facet_dim + 1
    neighbours: List[Set[int]] = []
    for face in iter_faces(n, facet_dim):
        present = set(face)
        adjacent: Set[int] = set()
        for i in range(size):
            rest = face[:i] + face[i + 1:]
            for v in range(n):
                if v not in present:
                    adjacent.add(face_rank(tuple(sorted(rest + (v,))), n))
        neighbours.append(adjacent)
    return neighbours


def enumerate_strongly_connected(n: int, facet_dim: int, k: int) -> Iterator[FacetSet]:
    """
    Yield every strongly-connected set of ``k`` facet_dim-faces on ``n``
    vertices exactly once.

    Sets are yielded in lexicographic order of their sorted colex-rank tuples.
    Uses the exclusive-neighbourhood extension scheme rooted at each set's
    minimum rank, so no set is produced twice.
    """
    if n > ENUMERATION_MAX_N or k > ENUMERATION_MAX_K:
        raise CapExceededError(
            f"Exhaustive enumeration capped at n <= {ENUMERATION_MAX_N}, k <= {ENUMERATION_MAX_K}"
            f" (got n={n}, k={k})"
        )
    if k < 1:
        raise InvalidFaceError(f"Set size must be positive, got {k}")
    if facet_dim < 0 or facet_dim + 1 > n:
        return

    neighbours = _skeleton_neighbours(n, facet_dim)
    total = len(neighbours)
    logger.debug("Enumerating strongly-connected %d-sets among %d faces (n=%d)", k, total, n)

    def extend(chosen: List[int], frontier: Set[int], closed: Set[int], root: int,
               out: List[Tuple[int, ...]]) -> None:
        if len(chosen) == k:
            out.append(tuple(sorted(chosen)))
            return
        pending = set(frontier)
        while pending:
            w = min(pending)
            pending.discard(w)
            exclusive = {u for u in neighbours[w] if u > root and u not in closed}
            extend(chosen + [w], pending | exclusive, closed | neighbours[w] | {w}, root, out)

    for root in range(total):
        found: List[Tuple[int, ...]] = []
        start = {u for u in neighbours[root] if u > root}
        extend([root], start, neighbours[root] | {root}, root, found)
        for ranks in sorted(found):
            yield FacetSet(n, frozenset(face_unrank(r, facet_dim, n) for r in ranks), facet_dim)

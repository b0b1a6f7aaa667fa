# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Samplers for the static model Y_d(n, p), the uniform m-face model and the
face-by-face random process, with exact hitting times.

All randomness comes from counter-based Philox generators keyed by an
integer seed, so (n, d, seed) fixes every face sequence bit for bit.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import comb, log
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.errors import AuditViolation, ConfigError, InvalidFaceError, ProcessExhaustedError
from src.homology_engine import homology, homology_is_zero
from src.simplex_core import Complex, Face, boundary_faces, canonical_face, face_rank, face_unrank

logger = logging.getLogger(__name__)


def make_generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def derive_seed(master_seed: int, *keys: int) -> int:
    """64-bit trial seed for ``keys`` (for example n and trial index) under ``master_seed``."""
    sequence = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _check_shape(n: int, d: int) -> int:
    if d < 1 or n < d + 1:
        raise InvalidFaceError(f"Need d >= 1 and n >= d + 1, got n={n}, d={d}")
    return comb(n, d + 1)


def sample_static(n: int, d: int, p: float, seed: int) -> Complex:
    """Y_d(n, p): every d-face independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"Probability must lie in [0, 1], got {p}")
    total = _check_shape(n, d)
    mask = make_generator(seed).random(total) < p
    faces = [face_unrank(int(r), d, n) for r in np.flatnonzero(mask)]
    logger.debug("sample_static(n=%d, d=%d, p=%g, seed=%d): %d faces", n, d, p, seed, len(faces))
    return Complex(n, d, faces)


def sample_uniform(n: int, d: int, m: int, seed: int) -> Complex:
    """Y_d(n, m): a uniformly random set of ``m`` d-faces."""
    total = _check_shape(n, d)
    if not 0 <= m <= total:
        raise ConfigError(f"Face count must lie in [0, {total}], got {m}")
    ranks = make_generator(seed).choice(total, size=m, replace=False)
    return Complex(n, d, (face_unrank(int(r), d, n) for r in ranks))


def threshold_face_count(n: int, d: int, c: float) -> int:
    """round((c log n / n) * C(n, d+1)), clipped to the number of d-faces."""
    total = _check_shape(n, d)
    return min(total, max(0, round(c * log(n) / n * total)))


class ProcessState:
    """
    One run of the random face process on ``n`` vertices.

    The permutation of d-faces is drawn lazily by Fisher-Yates over colex
    ranks; positions already swapped live in a sparse map. The cursor only
    moves through :meth:`step`, but :meth:`face_at` may draw ahead of it.
    """

    def __init__(self, n: int, d: int, seed: int):
        self.total = _check_shape(n, d)
        self.n = n
        self.d = d
        self.seed = seed
        self.cursor = 0
        self.isolated_count = comb(n, d)
        self.coverage: Dict[Face, int] = {}
        self._rng: Optional[np.random.Generator] = make_generator(seed)
        self._swaps: Dict[int, int] = {}
        self._order: List[int] = []
        self._t_iso: Optional[int] = None
        self._t_hom: Optional[int] = None

    @classmethod
    def from_order(cls, n: int, d: int, faces: Iterable[Iterable[int]]) -> "ProcessState":
        """Replay a fixed face order; faces not listed follow in colex order."""
        state = cls(n, d, seed=0)
        ranks = []
        seen = set()
        for face in faces:
            face = canonical_face(face, n)
            if len(face) != d + 1:
                raise InvalidFaceError(f"Face {face} does not have dimension {d}")
            rank = face_rank(face, n)
            if rank in seen:
                raise InvalidFaceError(f"Face {face} repeated in process order")
            seen.add(rank)
            ranks.append(rank)
        ranks.extend(r for r in range(state.total) if r not in seen)
        state._order = ranks
        state._rng = None
        return state

    def _draw(self) -> None:
        if self._rng is None:
            raise ProcessExhaustedError("Fixed process order is exhausted")
        i = len(self._order)
        j = int(self._rng.integers(i, self.total))
        value_i = self._swaps.pop(i, i)
        if j == i:
            self._order.append(value_i)
            return
        self._order.append(self._swaps.get(j, j))
        self._swaps[j] = value_i

    def face_at(self, index: int) -> Face:
        """The face added at step ``index + 1``."""
        if not 0 <= index < self.total:
            raise ProcessExhaustedError(f"Index {index} outside [0, {self.total})")
        while len(self._order) <= index:
            self._draw()
        return face_unrank(self._order[index], self.d, self.n)

    def step(self) -> Face:
        if self.cursor >= self.total:
            raise ProcessExhaustedError(f"All {self.total} faces have been added")
        face = self.face_at(self.cursor)
        self.cursor += 1
        for _, facet in boundary_faces(face):
            covered = self.coverage.get(facet, 0)
            if covered == 0:
                self.isolated_count -= 1
            self.coverage[facet] = covered + 1
        if self.isolated_count == 0 and self._t_iso is None:
            self._t_iso = self.cursor
        return face

    def faces(self, m: int) -> List[Face]:
        if not 0 <= m <= self.total:
            raise ConfigError(f"Snapshot size must lie in [0, {self.total}], got {m}")
        return [self.face_at(i) for i in range(m)]

    def snapshot(self, m: int) -> Complex:
        """Complex made of the first ``m`` faces of the permutation."""
        return Complex(self.n, self.d, self.faces(m))

    def __repr__(self) -> str:
        return f"ProcessState(n={self.n}, d={self.d}, seed={self.seed}, cursor={self.cursor})"


def process_new(n: int, d: int, seed: int) -> ProcessState:
    return ProcessState(n, d, seed)


def process_step(state: ProcessState) -> Face:
    return state.step()


def hitting_time_isolated(state: ProcessState) -> int:
    """First m at which no facet is isolated; advances the cursor as needed."""
    while state._t_iso is None:
        state.step()
    return state._t_iso


def hitting_time_homology(state: ProcessState) -> int:
    """
    First m with H_{d-1}(Y_m; Z) = 0, by binary search over [t_iso, C(n, d+1)].

    Vanishing is monotone along the process and impossible before t_iso.
    """
    if state._t_hom is not None:
        return state._t_hom
    low = hitting_time_isolated(state)
    high = state.total
    probes = 0
    while low < high:
        middle = (low + high) // 2
        probes += 1
        if homology_is_zero(state.snapshot(middle)):
            high = middle
        else:
            low = middle + 1
    logger.debug("%r: t_hom=%d after %d homology probes", state, low, probes)
    state._t_hom = low
    return low


def hitting_time_homology_scan(state: ProcessState) -> int:
    """First m with vanishing homology by scanning every m from 0."""
    for m in range(state.total + 1):
        if homology_is_zero(state.snapshot(m)):
            return m
    raise AuditViolation(f"{state!r}: homology never vanished, not even on the full skeleton")


@dataclass(frozen=True)
class HittingTimes:
    t_iso: int
    t_hom: int

    def __post_init__(self) -> None:
        if self.t_iso > self.t_hom:
            logger.error("Hitting times out of order: t_iso=%d > t_hom=%d", self.t_iso, self.t_hom)
            raise AuditViolation(f"t_iso={self.t_iso} exceeds t_hom={self.t_hom}")

    @property
    def coincide(self) -> bool:
        return self.t_iso == self.t_hom

    @property
    def gap(self) -> int:
        return self.t_hom - self.t_iso


@dataclass(frozen=True)
class TrialRecord:
    """One process trial; ``rank_before`` and ``torsion_before`` describe homology at t_iso - 1."""

    n: int
    d: int
    seed: int
    t_iso: int
    t_hom: int
    rank_before: int
    torsion_before: Tuple[int, ...] = field(default_factory=tuple)

    @property
    def coincide(self) -> bool:
        return self.t_iso == self.t_hom

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "d": self.d,
            "seed": self.seed,
            "t_iso": self.t_iso,
            "t_hom": self.t_hom,
            "coincide": self.coincide,
            "rank_before": self.rank_before,
            "torsion_before": list(self.torsion_before),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def run_trial(n: int, d: int, seed: int) -> TrialRecord:
    state = ProcessState(n, d, seed)
    times = HittingTimes(hitting_time_isolated(state), hitting_time_homology(state))
    before = homology(state.snapshot(times.t_iso - 1))
    return TrialRecord(n, d, seed, times.t_iso, times.t_hom, before.free_rank, before.torsion)

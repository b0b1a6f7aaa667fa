# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""Desk-scale audits behind the ``audit`` subcommands."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt
from typing import Any, Dict, List

from sympy import primerange

from src.cocycle_lab import DEFAULT_CAPS, Caps, check_conditions, coiso_audit_records, deterministic_rank_check
from src.errors import CapExceededError
from src.homology_engine import betti, coboundary_matrix
from src.lm_process import make_generator
from src.simplex_core import (
    Complex,
    enumerate_strongly_connected,
    spanning_tree_bound,
    strong_count_bound,
)
from src.zlinalg import Field, SparseIntMatrix, restricted_torsion_check, torsion_bound_holds

logger = logging.getLogger(__name__)


@dataclass
class AuditReport:
    name: str
    ok: bool = True
    checked: int = 0
    violations: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)

    def fail(self, row: Dict[str, Any]) -> None:
        self.ok = False
        self.violations += 1
        logger.error("%s audit violation: %s", self.name, row)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "audit": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "violations": self.violations,
            "details": self.details,
            "rows": self.rows,
        }


def coiso(n: int, d: int, field_spec: Field, support_cap: int, caps: Caps = DEFAULT_CAPS) -> AuditReport:
    report = AuditReport("coiso", details={"n": n, "d": d, "field": field_spec.label, "support_cap": support_cap,
                                           "caps": caps.to_dict()})
    for record in coiso_audit_records(n, d, field_spec, support_cap, caps):
        report.checked += 1
        report.rows.append(record)
        if not record["ok"]:
            report.fail(record)
    return report


def matrixbound(trials: int = 1000, max_size: int = 6, entry_bound: int = 3, seed: int = 0) -> AuditReport:
    """|coker(M)_T| <= t^rank(M) on random integer matrices, t the largest column norm."""
    rng = make_generator(seed)
    report = AuditReport("matrixbound", details={"trials": trials, "max_size": max_size,
                                                 "entry_bound": entry_bound, "seed": seed})
    largest = 1
    for trial in range(trials):
        rows = int(rng.integers(1, max_size + 1))
        cols = int(rng.integers(1, max_size + 1))
        dense = rng.integers(-entry_bound, entry_bound + 1, size=(rows, cols)).tolist()
        holds, order, bound = torsion_bound_holds(SparseIntMatrix.from_dense(dense))
        report.checked += 1
        largest = max(largest, order)
        if not holds:
            report.fail({"trial": trial, "matrix": dense, "torsion_order": order, "bound": bound})
    report.details["largest_torsion_order"] = largest
    return report


def complex_torsion(Y: Complex, caps: Caps = DEFAULT_CAPS) -> AuditReport:
    """
    For every facet set X with |X| <= support_cap, the coboundary of ``Y``
    restricted to X has no torsion prime q with q^2 > (d+1)^|X|, and meets
    the column-norm torsion bound.
    """
    delta = coboundary_matrix(Y)
    facets = delta.cols
    total = sum(comb(facets, k) for k in range(1, caps.support_cap + 1))
    if total > caps.enum_cap:
        raise CapExceededError(f"{total} facet sets exceed enum_cap={caps.enum_cap}")
    report = AuditReport("matrixbound-complex", details={"n": Y.n, "d": Y.d, "faces": len(Y),
                                                         "support_cap": caps.support_cap})
    for size in range(1, caps.support_cap + 1):
        for columns in combinations(range(facets), size):
            ok, primes = restricted_torsion_check(delta, columns, Y.d)
            holds, order, bound = torsion_bound_holds(delta.restrict_columns(columns))
            report.checked += 1
            if not (ok and holds):
                report.fail({"columns": list(columns), "primes": primes, "torsion_order": order, "bound": bound})
    return report


def strong_count(n_max: int = 6, facet_dim: int = 1, k_max: int = 4) -> AuditReport:
    """Exhaustive strongly-connected counts against the rooted-tree and closed-form bounds."""
    d = facet_dim + 1
    report = AuditReport("strong-count", details={"n_max": n_max, "facet_dim": facet_dim, "k_max": k_max})
    for n in range(facet_dim + 1, n_max + 1):
        for k in range(1, k_max + 1):
            count = sum(1 for _ in enumerate_strongly_connected(n, facet_dim, k))
            tree = spanning_tree_bound(n, d, k)
            closed = strong_count_bound(n, d, k)
            row = {"n": n, "k": k, "count": count, "tree_bound": tree, "bound": closed}
            report.rows.append(row)
            report.checked += 1
            if not count <= tree <= closed:
                report.fail(row)
    return report


def conditions(Y: Complex, caps: Caps = DEFAULT_CAPS) -> AuditReport:
    """
    Three-condition report plus its consequences: rank structure, and equal
    Betti numbers over the small primes and the rationals when conditions
    1 and 2 hold within caps.
    """
    condition_report = check_conditions(Y, caps)
    report = AuditReport("conditions", details={"n": Y.n, "d": Y.d, "faces": len(Y),
                                                "conditions": condition_report.to_dict(),
                                                "forces_free_rank": condition_report.forces_free_rank})
    report.details["rank_structure"] = deterministic_rank_check(Y, caps, conditions=condition_report)
    report.checked += 1
    if condition_report.forces_free_rank:
        rational = betti(Y)
        limit = isqrt((Y.d + 1) ** caps.k_max)
        for q in primerange(2, limit + 1):
            modular = betti(Y, int(q))
            row = {"q": int(q), "betti_q": modular, "betti_Q": rational}
            report.rows.append(row)
            report.checked += 1
            if modular != rational:
                report.fail(row)
    return report

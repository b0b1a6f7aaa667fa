# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

import pytest

from src import audits
from src.cocycle_lab import Caps
from src.errors import CapExceededError
from src.simplex_core import Complex, enumerate_strongly_connected
from src.zlinalg import Field


def test_report_records_failures():
    report = audits.AuditReport("demo")
    report.checked = 2
    report.fail({"case": 1})
    payload = report.to_dict()
    assert payload["ok"] is False
    assert payload["violations"] == 1
    assert payload["audit"] == "demo"


def test_matrixbound_small_run():
    report = audits.matrixbound(trials=50, seed=3)
    assert report.ok
    assert report.checked == 50
    assert report.details["largest_torsion_order"] >= 1


def test_matrixbound_is_seeded():
    first = audits.matrixbound(trials=20, seed=8).to_dict()
    assert first == audits.matrixbound(trials=20, seed=8).to_dict()


def test_complex_torsion_on_projective_plane(rp2):
    report = audits.complex_torsion(rp2, Caps(support_cap=2))
    assert report.ok
    assert report.checked == 15 + 105


def test_complex_torsion_cap(rp2):
    with pytest.raises(CapExceededError):
        audits.complex_torsion(rp2, Caps(support_cap=3, enum_cap=100))


def test_strong_count_small():
    report = audits.strong_count(n_max=5, facet_dim=1, k_max=3)
    assert report.ok
    row = next(r for r in report.rows if r["n"] == 4 and r["k"] == 2)
    assert row["count"] == 12
    assert row["count"] == sum(1 for _ in enumerate_strongly_connected(4, 1, 2))


def test_conditions_on_full_skeleton():
    report = audits.conditions(Complex.full_skeleton(5, 2))
    assert report.ok
    assert report.details["forces_free_rank"]
    assert report.details["rank_structure"] is True
    assert [row["q"] for row in report.rows] == [2, 3, 5, 7]


def test_conditions_on_projective_plane(rp2):
    report = audits.conditions(rp2)
    assert report.ok
    assert not report.details["forces_free_rank"]
    assert report.details["rank_structure"] is False
    assert report.rows == []


def test_coiso_report():
    report = audits.coiso(5, 2, Field(2), 2)
    assert report.ok
    assert report.checked == len(report.rows) > 0
    assert report.details["caps"]["support_cap"] == 3


@pytest.mark.slow
def test_matrixbound_acceptance():
    report = audits.matrixbound(trials=1000, max_size=6, entry_bound=3, seed=0)
    assert report.ok and report.violations == 0


@pytest.mark.slow
def test_strong_count_acceptance():
    report = audits.strong_count(n_max=6, facet_dim=1, k_max=4)
    assert report.ok
    assert all(r["count"] <= r["bound"] for r in report.rows)

# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

import json
from math import comb

import pytest

from conftest import RP2_FACES
from src.cocycle_lab import Caps
from src.errors import ConfigError
from src.experiment_harness import (
    CSV_COLUMNS,
    DEFAULT_MASTER_SEED,
    THREADS_ENV,
    ExperimentConfig,
    expected_adjacent_isolated_pairs,
    noadjacent_probability,
    rank_probe_face_count,
    resolve_threads,
    run_campaign,
    run_hitting,
    run_noadjacent,
    run_parallel,
    run_rank_structure,
    run_torsion_scan,
    scan_torsion,
    stderr_of,
    trend_holds,
)
from src.lm_process import ProcessState, hitting_time_homology, hitting_time_homology_scan


def small_config(**overrides):
    base = ExperimentConfig(n_values=[6, 7], trials=3, threads=1)
    return base.with_overrides(**overrides)


class TestConfig:
    def test_defaults(self):
        config = ExperimentConfig()
        assert config.master_seed == DEFAULT_MASTER_SEED == 20240611
        assert config.validate() is config

    @pytest.mark.parametrize(
        "overrides",
        [
            {"kind": "plot"},
            {"d": 0},
            {"n_values": []},
            {"n_values": [2]},
            {"trials": 0},
            {"stride": 0},
            {"threads": 0},
            {"p": 1.5},
            {"c": -1.0},
            {"m": -3},
        ],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ConfigError):
            ExperimentConfig(**overrides).validate()

    def test_load_and_overrides(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"kind": "torsion", "n_values": [6], "caps": {"k_max": 3}}))
        config = ExperimentConfig.load(str(path))
        assert config.kind == "torsion"
        assert config.caps == Caps(k_max=3)
        assert config.with_overrides(trials=5, d=None).trials == 5
        assert config.with_overrides(d=None).d == 2

    def test_load_rejects_garbage(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        with pytest.raises(ConfigError):
            ExperimentConfig.load(str(bad))
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"colour": "red"})
        with pytest.raises(ConfigError):
            ExperimentConfig.load(str(tmp_path / "missing.json"))

    def test_threads(self, monkeypatch):
        assert resolve_threads(3) == 3
        monkeypatch.setenv(THREADS_ENV, "2")
        assert resolve_threads() == 2
        monkeypatch.setenv(THREADS_ENV, "many")
        with pytest.raises(ConfigError):
            resolve_threads()
        monkeypatch.delenv(THREADS_ENV)
        assert resolve_threads() >= 1


class TestStatistics:
    def test_stderr(self):
        assert stderr_of(0.5, 100) == pytest.approx(0.05)
        assert stderr_of(1.0, 10) == 0.0

    def test_trend(self):
        assert trend_holds([0.5, 0.6, 0.7], [0.05, 0.05, 0.05])
        assert trend_holds([0.6, 0.55, 0.7], [0.05, 0.05, 0.05])
        assert not trend_holds([0.9, 0.5], [0.01, 0.01])
        assert trend_holds([0.3, 0.2, 0.0], [0.02, 0.02, 0.0], direction="nonincreasing")
        with pytest.raises(ConfigError):
            trend_holds([0.1], [0.1], direction="sideways")

    def test_first_moment_and_probe_points(self):
        assert expected_adjacent_isolated_pairs(10, 2, 1.0) == 0.0
        assert expected_adjacent_isolated_pairs(10, 2, 0.0) == comb(10, 3) * 3
        assert 0 < rank_probe_face_count(16, 2) < comb(16, 3)
        assert noadjacent_probability(10, 2) == pytest.approx(min(1.0, 2 * 2.302585092994046 / 10))


def test_parallel_keeps_job_order():
    jobs = [(i,) for i in range(8)]
    assert run_parallel(lambda i: {"i": i}, jobs, 1) == [{"i": i} for i in range(8)]


class TestCampaigns:
    def test_hitting_summary(self):
        summary = run_hitting(small_config())
        assert [row.n for row in summary.rows] == [6, 7]
        assert len(summary.records) == 6
        for record in summary.records:
            assert record["t_iso"] <= record["t_hom"]
        row = summary.row_for(6)
        assert 0.0 <= row.coincide_frac <= 1.0
        assert row.max_gap >= 0

    def test_reruns_are_byte_identical(self, tmp_path):
        first = run_campaign(small_config(output=str(tmp_path / "a")))
        second = run_campaign(small_config(output=str(tmp_path / "b")))
        assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        assert first.csv_text().splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_rank_full_and_empty(self):
        full = run_rank_structure(small_config(kind="rank", n_values=[5], m=comb(5, 3)))
        assert full.rows[0].rank_eq_frac == 1.0
        empty = run_rank_structure(small_config(kind="rank", n_values=[5], m=0))
        assert empty.rows[0].rank_eq_frac == 0.0
        assert all(not r["forces_free_rank"] for r in empty.records)

    def test_torsion_scan_on_graphs_is_free(self):
        summary = run_torsion_scan(small_config(kind="torsion", d=1, n_values=[6]))
        assert summary.rows[0].torsion_events == 0
        assert all(r["vanished_at"] is not None for r in summary.records)

    def test_scan_sees_injected_projective_plane(self):
        result = scan_torsion(ProcessState.from_order(6, 2, RP2_FACES))
        assert {"m": 10, "torsion": [2]} in result["events"]
        assert result["max_torsion_order"] == 2
        assert result["vanished_at"] is not None

    def test_noadjacent_extremes(self):
        always = run_noadjacent(small_config(kind="noadjacent", n_values=[5], p=0.0))
        assert always.rows[0].violation_frac == 1.0
        never = run_noadjacent(small_config(kind="noadjacent", n_values=[5], p=1.0))
        assert never.rows[0].violation_frac == 0.0
        assert all(r["isolated"] == 0 for r in never.records)

    def test_noadjacent_needs_ridges(self):
        with pytest.raises(ConfigError):
            run_noadjacent(small_config(kind="noadjacent", d=1))


@pytest.mark.slow
@pytest.mark.integration
class TestAcceptance:
    def test_hitting_order_across_dimensions(self):
        trials = 0
        for d in (1, 2, 3):
            n_values = list(range(max(6, d + 2), 17))
            summary = run_hitting(ExperimentConfig(d=d, n_values=n_values, trials=31, threads=1))
            trials += len(summary.records)
            assert all(r["t_iso"] <= r["t_hom"] for r in summary.records)
        assert trials >= 1000

    def test_coincidence_trend(self):
        summary = run_hitting(ExperimentConfig(d=2, n_values=[8, 12, 16], trials=100))
        fractions = [row.coincide_frac for row in summary.rows]
        stderrs = [row.stderr_coincide for row in summary.rows]
        assert trend_holds(fractions, stderrs, "nondecreasing", k=2)
        graphs = run_hitting(ExperimentConfig(d=1, n_values=[50], trials=200))
        assert graphs.rows[0].coincide_frac >= 0.9

    def test_rank_structure_oracle(self):
        summary = run_rank_structure(ExperimentConfig(kind="rank", d=2, n_values=[16], trials=100))
        assert len(summary.records) == 100
        assert 0.0 <= summary.rows[0].rank_eq_frac <= 1.0
        assert all(r["rank_eq"] for r in summary.records if r["forces_free_rank"])

    def test_rank_structure_near_full_skeleton(self):
        records = []
        for m in (comb(5, 3) - 1, comb(5, 3)):
            summary = run_rank_structure(ExperimentConfig(kind="rank", d=2, n_values=[5], trials=5, m=m, threads=1))
            records.extend(summary.records)
        full = [r for r in records if r["m"] == comb(5, 3)]
        assert full and all(r["forces_free_rank"] and r["rank_eq"] for r in full)
        assert all(r["rank_eq"] for r in records if r["forces_free_rank"])

    def test_noadjacent_trend(self):
        summary = run_noadjacent(ExperimentConfig(kind="noadjacent", d=2, n_values=[10, 20, 40], trials=100, c=2.0))
        fractions = [row.violation_frac for row in summary.rows]
        stderrs = [row.stderr_violation for row in summary.rows]
        assert trend_holds(fractions, stderrs, "nonincreasing", k=2)

    def test_monotonicity_oracle(self):
        for d in (1, 2):
            for n in range(d + 2, 9):
                for seed in range(5):
                    state = ProcessState(n, d, seed)
                    scan = scan_torsion(state)
                    t_hom = hitting_time_homology(state)
                    assert t_hom == hitting_time_homology_scan(ProcessState(n, d, seed))
                    assert scan["vanished_at"] == t_hom

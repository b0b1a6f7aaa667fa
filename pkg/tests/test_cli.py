# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

import json

import pytest

import main
from src.simplex_core import Complex


def run(capsys, *argv):
    code = main.main(list(argv))
    return code, capsys.readouterr().out


def test_homology_of_projective_plane(capsys):
    code, out = run(capsys, "homology", "rp2")
    assert code == main.EXIT_OK
    assert json.loads(out) == {"free_rank": 0, "torsion": [2]}


def test_homology_with_field(capsys):
    code, out = run(capsys, "homology", "rp2", "--field", "2")
    assert code == main.EXIT_OK
    payload = json.loads(out)
    assert payload["field"] == "Z/2"
    assert payload["betti"] == 1


def test_homology_dump_header(capsys):
    code, out = run(capsys, "homology", "rp2", "--dump")
    assert code == main.EXIT_OK
    assert out.splitlines()[0] == "15 10"


def test_homology_rejects_composite_field(capsys):
    code, _ = run(capsys, "homology", "rp2", "--field", "4")
    assert code == main.EXIT_USAGE


def test_homology_rejects_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _ = run(capsys, "homology", str(bad))
    assert code == main.EXIT_USAGE


def test_homology_rejects_missing_file(capsys, tmp_path):
    code, _ = run(capsys, "homology", str(tmp_path / "absent.json"))
    assert code == main.EXIT_USAGE


def test_homology_dimension_mismatch(capsys):
    code, _ = run(capsys, "homology", "rp2", "--d", "3")
    assert code == main.EXIT_USAGE


def test_sample_outputs_complex(capsys):
    code, out = run(capsys, "sample", "--n", "7", "--m", "5", "--seed", "3")
    assert code == main.EXIT_OK
    Y = Complex.from_json(out)
    assert (Y.n, Y.d, len(Y)) == (7, 2, 5)


def test_sample_needs_a_model(capsys):
    assert main.main(["sample", "--n", "7"]) == main.EXIT_USAGE


def test_process_is_reproducible(capsys):
    first = run(capsys, "process", "--d", "2", "--n", "10", "--seed", "7")
    second = run(capsys, "process", "--d", "2", "--n", "10", "--seed", "7")
    assert first == second
    record = json.loads(first[1])
    assert record["t_iso"] <= record["t_hom"]


def test_unknown_subcommand(capsys):
    assert main.main(["frobnicate"]) == main.EXIT_USAGE


def test_bad_flag(capsys):
    assert main.main(["process", "--n", "ten"]) == main.EXIT_USAGE


def test_audit_conditions_needs_input(capsys):
    code, _ = run(capsys, "audit", "conditions")
    assert code == main.EXIT_USAGE


def test_audit_strong_count(capsys):
    code, out = run(capsys, "audit", "strong-count", "--n", "5", "--d", "2", "--cap", "3")
    assert code == main.EXIT_OK
    assert json.loads(out)["ok"] is True


def test_audit_matrixbound_on_complex(capsys):
    code, out = run(capsys, "audit", "matrixbound", "--complex", "rp2", "--cap", "2")
    assert code == main.EXIT_OK
    assert json.loads(out)["audit"] == "matrixbound-complex"


def test_campaign_writes_outputs(capsys, tmp_path):
    base = tmp_path / "runs" / "hitting"
    code, out = run(capsys, "campaign", "hitting", "--d", "1", "--n", "6", "7", "--trials", "3",
                    "--threads", "1", "--seed", "5", "--out", str(base))
    assert code == main.EXIT_OK
    assert out.splitlines()[0].startswith("n,trials")
    assert len(out.splitlines()) == 3
    records = (tmp_path / "runs" / "hitting.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(records) == 6
    assert (tmp_path / "runs" / "hitting.csv").read_text(encoding="utf-8") == out


def test_campaign_rejects_bad_config(capsys):
    code, _ = run(capsys, "campaign", "hitting", "--n", "2", "--d", "2")
    assert code == main.EXIT_USAGE


@pytest.mark.slow
def test_audit_coiso(capsys):
    code, out = run(capsys, "audit", "coiso", "--n", "5", "--d", "2", "--field", "2", "--cap", "3")
    assert code == main.EXIT_OK
    assert json.loads(out)["violations"] == 0


def test_conditions_cap_sets_k_max(capsys):
    code, out = run(capsys, "audit", "conditions", "--complex", "rp2", "--cap", "2")
    assert code == main.EXIT_OK
    caps = json.loads(out)["details"]["conditions"]["caps"]
    assert caps["k_max"] == 2
    assert caps["support_cap"] == 3


def test_rank_campaign_cap_sets_k_max(capsys, tmp_path):
    base = tmp_path / "rank"
    code, _ = run(capsys, "campaign", "rank", "--d", "2", "--n", "5", "--m", "9", "--trials", "2",
                  "--threads", "1", "--cap", "2", "--out", str(base))
    assert code == main.EXIT_OK
    for line in (tmp_path / "rank.jsonl").read_text(encoding="utf-8").splitlines():
        assert json.loads(line)["conditions"]["caps"]["k_max"] == 2

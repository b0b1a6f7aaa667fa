# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

"""
Seeded Monte Carlo campaigns over the random face process and the static
model, with per-n aggregation and deterministic JSONL / CSV output.

Each trial gets its own seed derived from (master seed, n, trial index), so
trials can run in any worker and the records are still written in trial
order. Per-trial invariant failures raise :class:`AuditViolation` and abort
the campaign.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from math import comb, log, sqrt
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import psutil
from joblib import Parallel, delayed

from src.cocycle_lab import Caps, check_conditions, deterministic_rank_check
from src.errors import AuditViolation, ConfigError
from src.homology_engine import homology, top_betti, torsion_bound_ok, torsion_order
from src.lm_process import ProcessState, derive_seed, run_trial, sample_static
from src.simplex_core import Complex, isolated_facets, isolated_pairs_sharing_ridge

logger = logging.getLogger(__name__)

CAMPAIGN_KINDS = ("hitting", "rank", "torsion", "noadjacent")
DEFAULT_MASTER_SEED = 20240611
THREADS_ENV = "LMLAB_THREADS"

CSV_COLUMNS = (
    "n",
    "trials",
    "coincide_frac",
    "mean_gap",
    "max_gap",
    "rank_eq_frac",
    "torsion_events",
    "stderr_coincide",
    "violation_frac",
    "stderr_violation",
    "expected_pairs_bound",
)


@dataclass
class ExperimentConfig:
    kind: str = "hitting"
    d: int = 2
    n_values: List[int] = field(default_factory=lambda: [8, 12, 16])
    trials: int = 100
    master_seed: int = DEFAULT_MASTER_SEED
    caps: Caps = field(default_factory=Caps)
    output: Optional[str] = None
    threads: Optional[int] = None
    stride: int = 1
    c: Optional[float] = None
    p: Optional[float] = None
    m: Optional[int] = None

    def validate(self) -> "ExperimentConfig":
        if self.kind not in CAMPAIGN_KINDS:
            raise ConfigError(f"Unknown campaign kind {self.kind!r}; expected one of {CAMPAIGN_KINDS}")
        if self.d < 1:
            raise ConfigError(f"d must be at least 1, got {self.d}")
        if not self.n_values:
            raise ConfigError("n_values must not be empty")
        for n in self.n_values:
            if n <= self.d:
                raise ConfigError(f"Every n must exceed d={self.d}, got {n}")
        if self.trials < 1:
            raise ConfigError(f"trials must be at least 1, got {self.trials}")
        if self.stride < 1:
            raise ConfigError(f"stride must be at least 1, got {self.stride}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads must be at least 1, got {self.threads}")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.c is not None and self.c <= 0:
            raise ConfigError(f"c must be positive, got {self.c}")
        if self.m is not None and self.m < 0:
            raise ConfigError(f"m must be nonnegative, got {self.m}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["caps"] = self.caps.to_dict()
        return payload

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "ExperimentConfig":
        known = {item.name for item in fields(cls)}
        unknown = set(payload) - known
        if unknown:
            raise ConfigError(f"Unknown config keys: {sorted(unknown)}")
        values = dict(payload)
        if "caps" in values:
            if not isinstance(values["caps"], Mapping):
                raise ConfigError("caps must be an object")
            values["caps"] = Caps.from_dict(values["caps"])
        if "n_values" in values:
            if not isinstance(values["n_values"], list):
                raise ConfigError("n_values must be a list of integers")
            values["n_values"] = [int(n) for n in values["n_values"]]
        try:
            return cls(**values)
        except TypeError as exc:
            raise ConfigError(f"Invalid config: {exc}") from exc

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        logger.debug("Loading experiment config from %s", path)
        try:
            with open(path, "r", encoding="utf-8") as handle:
                payload = json.load(handle)
        except OSError as exc:
            raise ConfigError(f"Cannot read config file {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"Config file {path} is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ConfigError("Config JSON must be an object")
        return cls.from_dict(payload)

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with every override that is not None applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def resolve_threads(requested: Optional[int] = None) -> int:
    if requested:
        return requested
    env_value = os.environ.get(THREADS_ENV)
    if env_value:
        try:
            return max(1, int(env_value))
        except ValueError as exc:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env_value!r}") from exc
    return psutil.cpu_count(logical=True) or 1


def run_parallel(function: Callable[..., Dict[str, Any]], jobs: Sequence[Tuple[Any, ...]],
                 threads: int) -> List[Dict[str, Any]]:
    """Run ``function(*job)`` for every job; results come back in job order."""
    if threads == 1:
        return [function(*job) for job in jobs]
    return Parallel(n_jobs=threads)(delayed(function)(*job) for job in jobs)


def stderr_of(fraction: float, trials: int) -> float:
    return sqrt(fraction * (1.0 - fraction) / trials)


def trend_holds(values: Sequence[float], stderrs: Sequence[float], direction: str = "nondecreasing",
                k: float = 2.0) -> bool:
    """
    Monotone trend within Monte Carlo error: each consecutive step may move
    against ``direction`` by at most ``k`` combined standard errors.
    """
    if direction not in ("nondecreasing", "nonincreasing"):
        raise ConfigError(f"Unknown trend direction {direction!r}")
    if len(values) != len(stderrs):
        raise ConfigError("values and stderrs must have equal length")
    sign = 1.0 if direction == "nondecreasing" else -1.0
    for (a, sa), (b, sb) in zip(zip(values, stderrs), zip(values[1:], stderrs[1:])):
        if sign * (b - a) < -k * sqrt(sa * sa + sb * sb):
            return False
    return True


def expected_adjacent_isolated_pairs(n: int, d: int, p: float) -> float:
    """First-moment count of isolated facet pairs meeting in a ridge in Y_d(n, p)."""
    return comb(n, d + 1) * comb(d + 1, d - 1) * (1.0 - p) ** (2 * (n - d) - 1)


def rank_probe_face_count(n: int, d: int) -> int:
    return round((d - 0.25) * log(n) / n * comb(n, d + 1))


def noadjacent_probability(n: int, d: int, c: Optional[float] = None) -> float:
    c = float(d) if c is None else c
    return min(1.0, c * log(n) / n)


@dataclass
class NSummary:
    n: int
    trials: int
    coincide_frac: Optional[float] = None
    mean_gap: Optional[float] = None
    max_gap: Optional[int] = None
    rank_eq_frac: Optional[float] = None
    torsion_events: int = 0
    stderr_coincide: Optional[float] = None
    violation_frac: Optional[float] = None
    stderr_violation: Optional[float] = None
    expected_pairs_bound: Optional[float] = None

    def csv_row(self) -> List[str]:
        row = []
        for name in CSV_COLUMNS:
            value = getattr(self, name)
            if value is None:
                row.append("")
            elif isinstance(value, float):
                row.append(f"{value:.6f}")
            else:
                row.append(str(value))
        return row


@dataclass
class CampaignSummary:
    kind: str
    d: int
    master_seed: int
    caps: Caps
    rows: List[NSummary] = field(default_factory=list)
    records: List[Dict[str, Any]] = field(default_factory=list)

    def row_for(self, n: int) -> NSummary:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(n)

    def jsonl_text(self) -> str:
        return "".join(json.dumps(record) + "\n" for record in self.records)

    def csv_text(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow(row.csv_row())
        return buffer.getvalue()

    def write(self, output: str) -> Tuple[Path, Path]:
        """Write ``<output>.jsonl`` (trial records) and ``<output>.csv`` (per-n summary)."""
        base = Path(output)
        if base.suffix in (".jsonl", ".csv"):
            base = base.with_suffix("")
        records_path = base.with_name(base.name + ".jsonl")
        summary_path = base.with_name(base.name + ".csv")
        try:
            records_path.parent.mkdir(parents=True, exist_ok=True)
            records_path.write_text(self.jsonl_text(), encoding="utf-8")
            summary_path.write_text(self.csv_text(), encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"Cannot write campaign output under {base}: {exc}") from exc
        logger.info("Wrote %d records to %s and summary to %s", len(self.records), records_path, summary_path)
        return records_path, summary_path


def _hitting_trial(n: int, d: int, seed: int) -> Dict[str, Any]:
    return run_trial(n, d, seed).to_dict()


def _rank_trial(n: int, d: int, seed: int, m: int, caps: Caps) -> Dict[str, Any]:
    state = ProcessState(n, d, seed)
    Y = state.snapshot(min(m, state.total))
    summary = homology(Y)
    isolated = len(isolated_facets(Y))
    report = check_conditions(Y, caps)
    rank_eq = deterministic_rank_check(Y, caps, conditions=report)
    return {
        "n": n,
        "d": d,
        "seed": seed,
        "m": len(Y),
        "free_rank": summary.free_rank,
        "torsion": list(summary.torsion),
        "isolated": isolated,
        "rank_eq": rank_eq,
        "conditions": report.to_dict(),
        "forces_free_rank": report.forces_free_rank,
    }


def scan_torsion(state: ProcessState, stride: int = 1) -> Dict[str, Any]:
    """
    Walk the whole process at ``stride``, recording every probed m whose
    homology has torsion, the largest torsion order and the first m with a
    top-dimensional cycle. Homology must stay zero once it vanishes.
    """
    Y = Complex(state.n, state.d)
    events: List[Dict[str, Any]] = []
    max_order = 1
    first_top_cycle: Optional[int] = None
    vanished_at: Optional[int] = None
    probes = list(range(0, state.total + 1, stride))
    if probes[-1] != state.total:
        probes.append(state.total)

    added = 0
    for m in probes:
        while added < m:
            Y.add_face(state.face_at(added))
            added += 1
        summary = homology(Y)
        if vanished_at is not None and not summary.is_zero:
            raise AuditViolation(f"{state!r}: homology vanished at m={vanished_at} but not at m={m}")
        if summary.is_zero and vanished_at is None:
            vanished_at = m
        if summary.torsion:
            events.append({"m": m, "torsion": list(summary.torsion)})
            max_order = max(max_order, torsion_order(summary))
            if not torsion_bound_ok(summary, state.n, state.d):
                raise AuditViolation(f"{state!r}: torsion {summary.torsion} at m={m} exceeds the global bound")
        if first_top_cycle is None and top_betti(Y) > 0:
            first_top_cycle = m
    return {
        "events": events,
        "max_torsion_order": max_order,
        "first_top_cycle": first_top_cycle,
        "vanished_at": vanished_at,
    }


def _torsion_trial(n: int, d: int, seed: int, stride: int) -> Dict[str, Any]:
    record: Dict[str, Any] = {"n": n, "d": d, "seed": seed, "stride": stride}
    record.update(scan_torsion(ProcessState(n, d, seed), stride))
    return record


def _noadjacent_trial(n: int, d: int, seed: int, p: float) -> Dict[str, Any]:
    Y = sample_static(n, d, p, seed)
    pairs = isolated_pairs_sharing_ridge(Y)
    return {
        "n": n,
        "d": d,
        "seed": seed,
        "p": p,
        "faces": len(Y),
        "isolated": len(isolated_facets(Y)),
        "adjacent_pairs": len(pairs),
        "violation": bool(pairs),
    }


def _log_progress(kind: str, n: int, row: NSummary) -> None:
    rss_mb = psutil.Process().memory_info().rss / 2**20
    logger.info("Campaign %s: n=%d done (%d trials), rss=%.1f MiB", kind, n, row.trials, rss_mb)


def _run_per_n(config: ExperimentConfig,
               make_job: Callable[[int, int], Tuple[Any, ...]],
               function: Callable[..., Dict[str, Any]],
               aggregate: Callable[[int, List[Dict[str, Any]]], NSummary]) -> CampaignSummary:
    config.validate()
    threads = resolve_threads(config.threads)
    summary = CampaignSummary(config.kind, config.d, config.master_seed, config.caps)
    for n in config.n_values:
        jobs = [make_job(n, derive_seed(config.master_seed, n, i)) for i in range(config.trials)]
        records = run_parallel(function, jobs, threads)
        if len(records) != config.trials:
            raise AuditViolation(f"Expected {config.trials} records for n={n}, got {len(records)}")
        row = aggregate(n, records)
        summary.rows.append(row)
        summary.records.extend(records)
        _log_progress(config.kind, n, row)
    if config.output:
        summary.write(config.output)
    return summary


def run_hitting(config: ExperimentConfig) -> CampaignSummary:
    """Hitting times of isolated-facet coverage and of integral homology vanishing."""
    def aggregate(n: int, records: List[Dict[str, Any]]) -> NSummary:
        gaps = [r["t_hom"] - r["t_iso"] for r in records]
        if min(gaps) < 0:
            raise AuditViolation(f"Negative hitting-time gap at n={n}")
        coincide = sum(1 for r in records if r["coincide"]) / len(records)
        return NSummary(
            n=n,
            trials=len(records),
            coincide_frac=coincide,
            mean_gap=sum(gaps) / len(gaps),
            max_gap=max(gaps),
            torsion_events=sum(1 for r in records if r["torsion_before"]),
            stderr_coincide=stderr_of(coincide, len(records)),
        )

    return _run_per_n(config, lambda n, seed: (n, config.d, seed), _hitting_trial, aggregate)


def run_rank_structure(config: ExperimentConfig) -> CampaignSummary:
    """Homology against isolated facets at the (d - 1/4) log n / n face count."""
    def aggregate(n: int, records: List[Dict[str, Any]]) -> NSummary:
        rank_eq = sum(1 for r in records if r["rank_eq"]) / len(records)
        return NSummary(
            n=n,
            trials=len(records),
            rank_eq_frac=rank_eq,
            torsion_events=sum(1 for r in records if r["torsion"]),
        )

    def make_job(n: int, seed: int) -> Tuple[Any, ...]:
        m = config.m if config.m is not None else rank_probe_face_count(n, config.d)
        return (n, config.d, seed, m, config.caps)

    return _run_per_n(config, make_job, _rank_trial, aggregate)


def run_torsion_scan(config: ExperimentConfig) -> CampaignSummary:
    """Torsion events along full processes, probed every ``stride`` faces."""
    def aggregate(n: int, records: List[Dict[str, Any]]) -> NSummary:
        return NSummary(n=n, trials=len(records), torsion_events=sum(len(r["events"]) for r in records))

    return _run_per_n(config, lambda n, seed: (n, config.d, seed, config.stride), _torsion_trial, aggregate)


def run_noadjacent(config: ExperimentConfig) -> CampaignSummary:
    """Isolated facets meeting in a ridge in Y_d(n, c log n / n)."""
    if config.d < 2:
        raise ConfigError("The noadjacent campaign needs d >= 2")

    def probability(n: int) -> float:
        return config.p if config.p is not None else noadjacent_probability(n, config.d, config.c)

    def aggregate(n: int, records: List[Dict[str, Any]]) -> NSummary:
        violation = sum(1 for r in records if r["violation"]) / len(records)
        return NSummary(
            n=n,
            trials=len(records),
            violation_frac=violation,
            stderr_violation=stderr_of(violation, len(records)),
            expected_pairs_bound=expected_adjacent_isolated_pairs(n, config.d, probability(n)),
        )

    return _run_per_n(config, lambda n, seed: (n, config.d, seed, probability(n)), _noadjacent_trial, aggregate)


CAMPAIGNS: Dict[str, Callable[[ExperimentConfig], CampaignSummary]] = {
    "hitting": run_hitting,
    "rank": run_rank_structure,
    "torsion": run_torsion_scan,
    "noadjacent": run_noadjacent,
}


def run_campaign(config: ExperimentConfig) -> CampaignSummary:
    config.validate()
    logger.info("Starting %s campaign: d=%d, n=%s, %d trials each", config.kind, config.d, config.n_values,
                config.trials)
    return CAMPAIGNS[config.kind](config)

# SPDX-FileCopyrightText: Copyright (C) 2025 Akshat Kotpalliwar (alias IntegerAlex) <inquiry.akshatkotpalliwar@gmail.com>
# SPDX-License-Identifier: GPL-3.0-only

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from src import audits
from src.cocycle_lab import Caps
from src.errors import AuditViolation, ConfigError, LabError
from src.experiment_harness import CAMPAIGN_KINDS, DEFAULT_MASTER_SEED, ExperimentConfig, run_campaign
from src.homology_engine import betti, boundary_matrix, homology
from src.lm_process import run_trial, sample_static, sample_uniform
from src.simplex_core import Complex
from src.zlinalg import Field, matrix_dump

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

AUDIT_KINDS = ("coiso", "matrixbound", "strong-count", "conditions")
RP2_FIXTURE = Path(__file__).resolve().parent / "src" / "fixtures" / "rp2.json"


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=None, help="Top dimension d of the complex (default 2).")
    common.add_argument("--seed", type=int, default=None,
                        help=f"Seed of every random choice (default {DEFAULT_MASTER_SEED}).")
    common.add_argument("--out", default=None, help="Write the result here instead of stdout.")
    common.add_argument("--config", default=None, help="JSON experiment config; flags override its values.")
    common.add_argument("--debug", action="store_true", help="Enable verbose debug logging.")
    return common


def parse_cli_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="lmlab",
        description="Exact homology and hitting-time laboratory for random simplicial complexes.",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    sample = commands.add_parser("sample", parents=[common], help="Sample Y_d(n, p) or Y_d(n, m) as complex JSON.")
    sample.add_argument("--n", type=int, required=True, help="Number of vertices.")
    model = sample.add_mutually_exclusive_group(required=True)
    model.add_argument("--p", type=float, help="Face probability of the static model.")
    model.add_argument("--m", type=int, help="Face count of the uniform model.")

    homology_cmd = commands.add_parser("homology", parents=[common], help="H_{d-1}(Y; Z) of a complex JSON file.")
    homology_cmd.add_argument("complex", nargs="?", default="-",
                              help="Complex JSON file; '-' reads stdin, 'rp2' the bundled projective plane.")
    homology_cmd.add_argument("--field", default=None, help="Also report the Betti number over Z/q or Q.")
    homology_cmd.add_argument("--dump", action="store_true", help="Print the boundary matrix in text dump form.")

    process = commands.add_parser("process", parents=[common], help="Run one face process and report hitting times.")
    process.add_argument("--n", type=int, required=True, help="Number of vertices.")

    audit = commands.add_parser("audit", parents=[common], help="Run an exact desk-scale audit.")
    audit.add_argument("kind", choices=AUDIT_KINDS)
    audit.add_argument("--n", type=int, default=None,
                       help="Vertices (coiso, conditions) or largest vertex count (strong-count).")
    audit.add_argument("--m", type=int, default=None, help="Faces of the uniform sample audited by 'conditions'.")
    audit.add_argument("--field", default="2", help="Prime field of the coiso audit (default 2).")
    audit.add_argument("--cap", type=int, default=None,
                       help="Support cap (coiso, matrixbound --complex) or largest support size k_max "
                            "(conditions, strong-count).")
    audit.add_argument("--trials", type=int, default=None, help="Random matrices for matrixbound (default 1000).")
    audit.add_argument("--complex", default=None, help="Complex JSON file for matrixbound and conditions.")

    campaign = commands.add_parser("campaign", parents=[common], help="Run a seeded Monte Carlo campaign.")
    campaign.add_argument("kind", choices=CAMPAIGN_KINDS)
    campaign.add_argument("--n", type=int, nargs="+", default=None, help="Vertex counts to sweep.")
    campaign.add_argument("--trials", type=int, default=None, help="Trials per vertex count.")
    campaign.add_argument("--p", type=float, default=None, help="Face probability (noadjacent).")
    campaign.add_argument("--c", type=float, default=None, help="Constant c of p = c log n / n (noadjacent).")
    campaign.add_argument("--m", type=int, default=None, help="Face count probed by the rank campaign.")
    campaign.add_argument("--stride", type=int, default=None, help="Probe every stride-th face (torsion).")
    campaign.add_argument("--threads", type=int, default=None, help="Worker processes (default: all cores).")
    campaign.add_argument("--cap", type=int, default=None,
                          help="Largest cocycle support size k_max of the condition checks (rank).")

    return parser.parse_args(argv)


def configure_logging(debug_enabled: bool) -> None:
    level = logging.DEBUG if debug_enabled else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    try:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot write {out}: {exc}") from exc
    logger.info("Wrote %s", out)


def _read_complex(source: str) -> Complex:
    if source == "-":
        return Complex.from_json(sys.stdin.read())
    if source == "rp2":
        return Complex.load(str(RP2_FIXTURE))
    if not os.path.exists(source):
        raise ConfigError(f"Complex file {source} does not exist")
    return Complex.load(source)


def _config_from(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig.load(args.config) if args.config else ExperimentConfig()


def _caps_from(args: argparse.Namespace, base: Caps, name: str = "support_cap") -> Caps:
    """Copy of ``base`` with the cap called ``name`` set from --cap."""
    cap = getattr(args, "cap", None)
    if cap is None:
        return base
    return Caps.from_dict({**base.to_dict(), name: cap})


def _seed(args: argparse.Namespace) -> int:
    return DEFAULT_MASTER_SEED if args.seed is None else args.seed


def _dim(args: argparse.Namespace) -> int:
    return 2 if args.d is None else args.d


def cmd_sample(args: argparse.Namespace) -> int:
    d = _dim(args)
    if args.p is not None:
        Y = sample_static(args.n, d, args.p, _seed(args))
    else:
        Y = sample_uniform(args.n, d, args.m, _seed(args))
    logger.info("Sampled %r", Y)
    _emit(Y.to_json(), args.out)
    return EXIT_OK


def cmd_homology(args: argparse.Namespace) -> int:
    Y = _read_complex(args.complex)
    if args.d is not None and args.d != Y.d:
        raise ConfigError(f"--d {args.d} does not match the complex dimension {Y.d}")
    if args.dump:
        _emit(matrix_dump(boundary_matrix(Y)), args.out)
        return EXIT_OK
    summary = homology(Y)
    if args.field is None:
        _emit(summary.to_json(), args.out)
        return EXIT_OK
    field = Field.parse(args.field)
    payload = {**summary.to_dict(), "field": field.label, "betti": betti(Y, field)}
    _emit(json.dumps(payload, separators=(",", ":")), args.out)
    return EXIT_OK


def cmd_process(args: argparse.Namespace) -> int:
    record = run_trial(args.n, _dim(args), _seed(args))
    logger.info("t_iso=%d t_hom=%d coincide=%s", record.t_iso, record.t_hom, record.coincide)
    _emit(record.to_json(), args.out)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    base = _config_from(args).caps
    caps = _caps_from(args, base, "k_max" if args.kind == "conditions" else "support_cap")
    d = _dim(args)
    if args.kind == "coiso":
        report = audits.coiso(args.n or 5, d, Field.parse(args.field), caps.support_cap, caps)
    elif args.kind == "matrixbound":
        if args.complex:
            report = audits.complex_torsion(_read_complex(args.complex), caps)
        else:
            report = audits.matrixbound(trials=args.trials or 1000, seed=_seed(args))
    elif args.kind == "strong-count":
        report = audits.strong_count(n_max=args.n or 6, facet_dim=d - 1, k_max=args.cap or 4)
    else:
        if args.complex:
            Y = _read_complex(args.complex)
        elif args.n is not None and args.m is not None:
            Y = sample_uniform(args.n, d, args.m, _seed(args))
        else:
            raise ConfigError("audit conditions needs --complex, or --n with --m")
        report = audits.conditions(Y, caps)
    logger.info("Audit %s: %d checked, %d violations", report.name, report.checked, report.violations)
    _emit(json.dumps(report.to_dict()), args.out)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_campaign(args: argparse.Namespace) -> int:
    config = _config_from(args)
    config = config.with_overrides(
        kind=args.kind,
        d=args.d,
        n_values=args.n,
        trials=args.trials,
        master_seed=args.seed,
        output=args.out,
        threads=args.threads,
        stride=args.stride,
        c=args.c,
        p=args.p,
        m=args.m,
        caps=_caps_from(args, config.caps, "k_max") if args.cap is not None else None,
    ).validate()
    summary = run_campaign(config)
    if config.output:
        summary.write(config.output)
    sys.stdout.write(summary.csv_text())
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "sample": cmd_sample,
    "homology": cmd_homology,
    "process": cmd_process,
    "audit": cmd_audit,
    "campaign": cmd_campaign,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse_cli_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.debug)
    logger.debug("Arguments: %s", vars(args))
    try:
        return COMMANDS[args.command](args)
    except AuditViolation as exc:
        logger.error("Audit violation: %s", exc)
        return EXIT_VIOLATION
    except LabError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Subcommands: simulate (campaign CSV + summary JSON), sweep (one campaign
per value of a scenario field), limits (convergence probes), verify
(precoder moment checks), dump-realization (positions of one drop).

Exit codes: 0 success, 1 validation failure, 2 check failure. Data files
are plain CSV with '.' decimals and full-precision floats, or JSON for
nested reports; nothing timestamped, so identical runs are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import fields
from pathlib import Path

from .asymptotics import (DEFAULT_SCHEDULES, DivergentLimitError, ProbePoint,
                          convergence_probe, default_regime, make_probe_budget)
from .channel import assemble_link_budget, realize_network
from .geometry import DOWNLINK, UPLINK
from .hardening_oracle import verify_precoder_moments
from .montecarlo import run_campaign
from .rng import stream_for_drop
from .scenario import (Scenario, default_scenario, scenario_from_file,
                       scenario_from_mapping)
from .sqinr import closed_form_sqinr

_GAP_TOLERANCES = {"full_resolution": 0.001, "high_snr": 0.01,
                   "power_scaling": 0.01, "antenna_ratio": 0.01}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems with exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="scenario key=value file")
    p.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                   dest="overrides", help="override one scenario field")
    p.add_argument("--out", metavar="PATH", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--audit", action="store_true",
                   help="also emit per-user SQINR breakdowns of drop 0")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fdmimo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("simulate", help="run a Monte Carlo campaign")
    _add_common(p)

    p = sub.add_parser("sweep", help="one campaign per value of a field")
    _add_common(p)
    p.add_argument("--axis", required=True, help="scenario field to sweep")
    p.add_argument("--values", required=True,
                   help="comma-separated field values")

    p = sub.add_parser("limits", help="convergence probes toward each limit")
    _add_common(p)
    p.add_argument("--regime", choices=tuple(DEFAULT_SCHEDULES) + ("all",),
                   default="all")

    p = sub.add_parser("verify", help="precoder moment checks")
    _add_common(p)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("dump-realization", help="positions of one drop")
    _add_common(p)
    p.add_argument("--drop-index", type=int, default=0)
    return parser


def _field_names() -> tuple[str, ...]:
    return tuple(f.name for f in fields(Scenario))


def _with_updates(scenario: Scenario, updates: dict) -> Scenario:
    merged = {name: getattr(scenario, name) for name in _field_names()}
    merged.update(updates)
    return scenario_from_mapping(merged)


def _load_scenario(args) -> Scenario:
    scenario = scenario_from_file(args.config) if args.config \
        else default_scenario()
    updates = {}
    for item in args.overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"override {item!r} is not KEY=VALUE")
        updates[key] = value
    return _with_updates(scenario, updates) if updates else scenario


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _sidecar(path: str, tag: str) -> str:
    p = Path(path)
    return str(p.with_name(p.stem + f".{tag}.json"))


def _audit_breakdowns(scenario: Scenario) -> list[dict]:
    stream = stream_for_drop(scenario.base_seed, 0)
    realization = realize_network(scenario, stream)
    return [closed_form_sqinr(
        assemble_link_budget(realization, scenario, k)).to_dict()
        for k in range(scenario.k_downlink_per_cell)]


def _cmd_simulate(args) -> int:
    scenario = _load_scenario(args)
    stats = run_campaign(scenario, workers=args.workers)
    rows = list(zip(range(stats.n_drops), stats.samples.tolist(),
                    stats.gross_se_samples.tolist(),
                    stats.effective_se_samples.tolist()))
    header = ["drop_index", "avg_sqinr_db", "gross_se", "effective_se"]
    summary = stats.summary()
    if args.format == "json":
        payload = {"samples": [dict(zip(header, r)) for r in rows],
                   "summary": summary}
        if args.audit:
            payload["audit"] = _audit_breakdowns(scenario)
        _write_text(args.out, _json_text(payload))
        return 0
    _write_text(args.out, _csv_text(header, rows))
    if args.out is not None:
        _write_text(_sidecar(args.out, "summary"), _json_text(summary))
        if args.audit:
            _write_text(_sidecar(args.out, "audit"),
                        _json_text(_audit_breakdowns(scenario)))
    elif args.audit:
        raise ValueError("--audit with csv output requires --out")
    return 0


def _cmd_sweep(args) -> int:
    scenario = _load_scenario(args)
    if args.axis not in _field_names():
        raise ValueError(f"unknown sweep axis {args.axis!r}")
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    if not values:
        raise ValueError("sweep needs at least one value")
    header = ["axis", "value", "q05_sqinr_db", "q25_sqinr_db", "q50_sqinr_db",
              "q75_sqinr_db", "q95_sqinr_db", "mean_gross_se",
              "mean_effective_se"]
    rows = []
    for value in values:
        sc = _with_updates(scenario, {args.axis: value})
        summary = run_campaign(sc, workers=args.workers).summary()
        q = summary["sqinr_db_quantiles"]
        rows.append([args.axis, value, q["5"], q["25"], q["50"], q["75"],
                     q["95"], summary["mean_gross_se"],
                     summary["mean_effective_se"]])
    if args.format == "json":
        _write_text(args.out,
                    _json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write_text(args.out, _csv_text(header, rows))
    return 0


def _probe_rows(kind: str, points: list[ProbePoint]):
    return [[kind, p.scale, p.se_bits, p.limit_bits, p.gap] for p in points]


def _cmd_limits(args) -> int:
    budget = make_probe_budget()
    kinds = tuple(DEFAULT_SCHEDULES) if args.regime == "all" else (args.regime,)
    rows, failed = [], False
    for kind in kinds:
        points = convergence_probe(default_regime(kind), budget)
        rows.extend(_probe_rows(kind, points))
        final = points[-1]
        if final.gap > _GAP_TOLERANCES[kind] * abs(final.limit_bits):
            failed = True
    header = ["regime", "scale", "se_bits", "limit_bits", "gap"]
    if args.format == "json":
        _write_text(args.out, _json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write_text(args.out, _csv_text(header, rows))
    return 2 if failed else 0


def _cmd_verify(args) -> int:
    scenario = _load_scenario(args)
    budget = make_probe_budget(n_copilot=0, k_downlink=4, k_uplink=0,
                               snr_own=1e8, n_antennas=scenario.n_antennas,
                               varrho=200.0, bits=float("inf"))
    report = verify_precoder_moments(budget, args.samples, seed=args.seed)
    _write_text(args.out, _json_text(report.to_dict()))
    return 0 if report.all_passed else 2


def _cmd_dump_realization(args) -> int:
    scenario = _load_scenario(args)
    stream = stream_for_drop(scenario.base_seed, args.drop_index)
    realization = realize_network(scenario, stream)
    rows = []
    for direction, block in ((DOWNLINK, realization.dl_positions),
                             (UPLINK, realization.ul_positions)):
        for cell in range(block.shape[0]):
            for idx in range(block.shape[1]):
                x, y = block[cell, idx]
                rows.append([cell, idx, direction, float(x), float(y), cell])
    header = ["cell_id", "user_index", "direction", "x_m", "y_m",
              "serving_cell"]
    if args.format == "json":
        _write_text(args.out, _json_text([dict(zip(header, r)) for r in rows]))
    else:
        _write_text(args.out, _csv_text(header, rows))
    return 0


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "limits": _cmd_limits,
    "verify": _cmd_verify,
    "dump-realization": _cmd_dump_realization,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (None, 0):
            return 0
        return int(code) if isinstance(code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError, DivergentLimitError) as exc:
        # KeyError.__str__ wraps the message in repr quotes
        message = exc.args[0] if exc.args else exc
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

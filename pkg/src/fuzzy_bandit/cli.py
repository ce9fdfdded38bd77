"""Command-line front end: run benchmarks, sweep parameters, export
membership curves, and plot learning curves from saved CSV files.

Exit codes: 0 success, 1 bad input (config/flags; the message names the
offending key), 2 output I/O failure.  Numbers in CSV files use the
shortest round-trip decimal form so identical configs yield byte-identical
files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    SweepResult,
    run_experiment,
    sweep,
)
from .fuzzy_engine import MembershipCurves, build_rule_base, membership_curves
from .svg import line_chart

__all__ = [
    "main",
    "entry_point",
    "load_config",
    "parse_value_list",
    "write_curve_csv",
    "write_summary_json",
    "write_manifest_json",
    "write_sweep_csv",
    "write_membership_csv",
]

CURVE_HEADER = "play,policy,pct_optimal,avg_reward"
MEMBERSHIP_HEADER = "rule_index,variable,grid_value,membership"
SWEEP_HEADER = "policy,parameter,max,mean,median,max_minus_median"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt(x) -> str:
    """Shortest decimal that round-trips to the same float."""
    return repr(float(x))


# ---------------------------------------------------------------- config

def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config file and apply flag overrides (flags win)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(1, f"cannot read config: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(1, f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise CliError(1, "config must be a JSON object")
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value
    try:
        return ExperimentConfig.from_dict(raw)
    except ValueError as exc:
        raise CliError(1, str(exc)) from None


def parse_value_list(text: str) -> list[float]:
    """Parse "0.05,0.1,0.2" or "start:step:stop" (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f'range must be "start:step:stop", got "{text}"')
        try:
            start, step, stop = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f'range values must be numbers, got "{text}"') from None
        if not step > 0:
            raise ValueError(f"range step must be > 0, got {step}")
        if stop < start:
            raise ValueError(f"range stop must be >= start, got {start}..{stop}")
        count = int(round((stop - start) / step)) + 1
        values = [start + i * step for i in range(count)]
        # snap the endpoint so accumulated rounding cannot push a value
        # just past the stated stop (e.g. an xi grid past 1.0)
        if abs(values[-1] - stop) <= 1e-9 * max(1.0, abs(stop)):
            values[-1] = stop
        return values
    try:
        values = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValueError(f'list values must be numbers, got "{text}"') from None
    if not values:
        raise ValueError("empty value list")
    return values


# ---------------------------------------------------------------- writers

def _write_text(path: Path, content: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
    except OSError as exc:
        raise CliError(2, f"cannot write {path}: {exc}") from None


def write_curve_csv(path, result: ExperimentResult) -> None:
    """One row per (play, policy), plays ascending then config order."""
    lines = [CURVE_HEADER]
    for t in range(result.config.plays):
        for label, curve in zip(result.labels, result.curves):
            lines.append(
                f"{t + 1},{_quote(label)},{_fmt(curve.pct_optimal[t])},{_fmt(curve.avg_reward[t])}"
            )
    _write_text(Path(path), "\n".join(lines) + "\n")


def _quote(field: str) -> str:
    if any(c in field for c in ',"\n'):
        return '"' + field.replace('"', '""') + '"'
    return field


def write_summary_json(path, result: ExperimentResult) -> None:
    """Per-policy digest, values rounded to 4 decimal places."""
    payload = {
        label: {
            "maximum": round(s.maximum, 4),
            "mean": round(s.mean, 4),
            "median": round(s.median, 4),
            "max_minus_median": round(s.max_minus_median, 4),
        }
        for label, s in zip(result.labels, result.stats)
    }
    _write_text(Path(path), json.dumps(payload, indent=2) + "\n")


def write_manifest_json(path, result: ExperimentResult, started: str,
                        finished: str, outputs: dict) -> None:
    """Record enough to replay the experiment bit-for-bit: the resolved
    config plus tool version, timestamps and output names."""
    payload = {
        "tool_version": __version__,
        "started": started,
        "finished": finished,
        "config": result.config.to_dict(),
        "outputs": outputs,
    }
    _write_text(Path(path), json.dumps(payload, indent=2) + "\n")


def write_sweep_csv(path, result: SweepResult) -> None:
    lines = [SWEEP_HEADER]
    for row in result.rows:
        s = row.stats
        lines.append(
            f"{row.kind},{_fmt(row.value)},{_fmt(s.maximum)},{_fmt(s.mean)},"
            f"{_fmt(s.median)},{_fmt(s.max_minus_median)}"
        )
    _write_text(Path(path), "\n".join(lines) + "\n")


def write_membership_csv(path, curves: MembershipCurves) -> None:
    """Rule-major rows; 1-based rule indices, variable "in" then "out"."""
    lines = [MEMBERSHIP_HEADER]
    n = curves.input_values.shape[0]
    for j in range(n):
        for x, m in zip(curves.input_grid, curves.input_values[j]):
            lines.append(f"{j + 1},in,{_fmt(x)},{_fmt(m)}")
        for y, m in zip(curves.output_grid, curves.output_values[j]):
            lines.append(f"{j + 1},out,{_fmt(y)},{_fmt(m)}")
    _write_text(Path(path), "\n".join(lines) + "\n")


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


# ---------------------------------------------------------------- commands

def cmd_run(args) -> int:
    overrides = {"seed": args.seed, "runs": args.runs,
                 "plays": args.plays, "arms": args.arms}
    config = load_config(args.config, overrides)
    out_dir = Path(args.out)
    started = _utc_now()
    result = run_experiment(config)
    finished = _utc_now()
    outputs = {
        "curve_csv": "curve.csv",
        "summary_json": "summary.json",
        "manifest_json": "manifest.json",
    }
    write_curve_csv(out_dir / "curve.csv", result)
    write_summary_json(out_dir / "summary.json", result)
    write_manifest_json(out_dir / "manifest.json", result, started, finished, outputs)
    for label, s in zip(result.labels, result.stats):
        print(f"{label}: max={s.maximum:.4f} mean={s.mean:.4f} "
              f"median={s.median:.4f} max-median={s.max_minus_median:.4f}")
    print(f"wrote {out_dir / 'curve.csv'}, summary.json, manifest.json")
    return 0


def cmd_sweep(args) -> int:
    overrides = {"seed": args.seed, "runs": args.runs,
                 "plays": args.plays, "arms": args.arms}
    config = load_config(args.config, overrides)
    grid = []
    for kind, flag in (("fuzzy", args.xi), ("softmax", args.tau),
                       ("epsilon_greedy", args.epsilon)):
        if flag is not None:
            try:
                grid.append((kind, parse_value_list(flag)))
            except ValueError as exc:
                raise CliError(1, str(exc)) from None
    if not grid:
        raise CliError(1, "empty sweep grid: pass --xi, --tau and/or --epsilon")
    result = sweep(config, grid)
    out_dir = Path(args.out)
    write_sweep_csv(out_dir / "sweep.csv", result)
    for kind, value in result.best.items():
        print(f"best {kind} parameter by mean %-optimal: {value!r}")
    print(f"wrote {out_dir / 'sweep.csv'} ({len(result.rows)} grid points)")
    return 0


def cmd_membership(args) -> int:
    try:
        rb = build_rule_base(args.arms, args.alpha, args.beta, args.xi)
        curves = membership_curves(rb, args.resolution)
    except ValueError as exc:
        raise CliError(1, str(exc)) from None
    out_path = Path(args.out)
    write_membership_csv(out_path, curves)
    written = [str(out_path)]
    if args.svg:
        series = [
            (f"rule {j + 1}", curves.output_grid, curves.output_values[j])
            for j in range(rb.n)
        ]
        svg_path = out_path.with_suffix(".svg")
        _write_text(svg_path, line_chart(
            series,
            title=f"output membership functions (xi={rb.xi:g}, n={rb.n})",
            x_label="output value",
            y_label="membership",
        ))
        written.append(str(svg_path))
    print(f"wrote {', '.join(written)}")
    return 0


def _read_curve_csv(path) -> list[tuple[str, list[float], list[float]]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(1, f"cannot read curve file: {exc}") from None
    rows = list(csv.reader(text.splitlines()))
    if not rows or ",".join(rows[0]) != CURVE_HEADER:
        raise CliError(1, f'malformed curve file: expected header "{CURVE_HEADER}"')
    series: dict[str, tuple[list[float], list[float]]] = {}
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != 4:
            raise CliError(1, f"malformed curve file: line {i} has {len(row)} fields")
        try:
            play = int(row[0])
            pct = float(row[2])
        except ValueError:
            raise CliError(1, f"malformed curve file: bad number on line {i}") from None
        xs, ys = series.setdefault(row[1], ([], []))
        xs.append(float(play))
        ys.append(pct)
    if not series:
        raise CliError(1, "malformed curve file: no data rows")
    return [(label, xs, ys) for label, (xs, ys) in series.items()]


def cmd_plot(args) -> int:
    series = _read_curve_csv(args.curve_csv)
    svg = line_chart(
        series,
        title="learning curves",
        x_label="play",
        y_label="% optimal action",
    )
    _write_text(Path(args.out), svg)
    print(f"wrote {args.out}")
    return 0


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; keep 2 reserved for I/O
    def error(self, message):
        raise CliError(1, message)


def _add_override_flags(p) -> None:
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--runs", type=int, help="override the number of runs")
    p.add_argument("--plays", type=int, help="override plays per run")
    p.add_argument("--arms", type=int, help="override the number of arms")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fuzzy-bandit",
                     description="n-armed bandit benchmark harness for "
                                 "fuzzy and baseline action-selection policies")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a benchmark from a JSON config")
    p.add_argument("--config", required=True, help="JSON config path")
    p.add_argument("--out", required=True, help="output directory")
    _add_override_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep policy parameters over a grid")
    p.add_argument("--config", required=True, help="JSON config path")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--xi", help='fuzzy knob values: "a,b,c" or "start:step:stop"')
    p.add_argument("--tau", help="softmax temperature values (same formats)")
    p.add_argument("--epsilon", help="epsilon-greedy values (same formats)")
    _add_override_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("membership", help="export membership-function curves")
    p.add_argument("--arms", type=int, required=True, help="number of rules/actions")
    p.add_argument("--xi", type=float, required=True, help="fuzzy knob in [0, 1]")
    p.add_argument("--alpha", type=float, default=0.0, help="lower value bound")
    p.add_argument("--beta", type=float, default=1.0, help="upper value bound")
    p.add_argument("--resolution", type=int, default=201, help="samples per curve")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", action="store_true",
                   help="also write an overlay plot next to the CSV")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("plot", help="render a curve.csv as an SVG line chart")
    p.add_argument("curve_csv", help="curve.csv produced by the run command")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())

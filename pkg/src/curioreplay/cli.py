"""Command line entry points: run, matrix, detect, analyze."""

from __future__ import annotations

import argparse
import csv
import os
import sys

from .config import ConfigError, config_load_file
from .detector import detect_offline
from .harness import run_experiment, run_matrix


def _read_signal(path: str) -> list[float]:
    """Accepts a bare single-column file or a CSV with a 'c' column."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        return []
    try:
        float(rows[0][0])
        header = None
    except ValueError:
        header = rows[0]
        rows = rows[1:]
    if header is None:
        column = 0
    elif "c" in header:
        column = header.index("c")
    elif len(header) == 1:
        column = 0
    else:
        raise ValueError(f"{path}: no 'c' column among {header}")
    return [float(row[column]) for row in rows]


def _cmd_run(args) -> int:
    cfg = config_load_file(args.config)
    summary = run_experiment(cfg, seed=args.seed, out_dir=args.out)
    print(f"run complete: seed={summary.seed} out={summary.out_dir}")
    print(f"boundaries: {summary.boundaries}")
    for label, (count, ratio) in summary.final_composition.items():
        print(f"composition task {label}: count={count} ratio={ratio:.4f}")
    return 0


def _cmd_matrix(args) -> int:
    cfg = config_load_file(args.config)
    seeds = [cfg.harness.seed + i for i in range(args.seeds)]
    summaries = run_matrix(cfg, seeds, out_dir=args.out)[0]
    print(f"matrix complete: {len(summaries)}/{len(seeds)} runs succeeded")
    return 0 if len(summaries) == len(seeds) else 1


def _cmd_detect(args) -> int:
    values = _read_signal(args.input)
    for index in detect_offline(values, args.n, args.k, args.mf, args.delta):
        print(index)
    return 0


def _cmd_analyze(args) -> int:
    comp_path = os.path.join(args.run, "composition.csv")
    bounds_path = os.path.join(args.run, "boundaries.csv")
    for path in (comp_path, bounds_path):
        if not os.path.exists(path):
            raise FileNotFoundError(path)
    with open(comp_path, newline="") as fh:
        comp = list(csv.DictReader(fh))
    with open(bounds_path, newline="") as fh:
        bounds = [row["t"] for row in csv.DictReader(fh)]
    print(f"detected boundaries ({len(bounds)}): {', '.join(bounds) if bounds else 'none'}")
    if comp:
        final_t = max(int(row["snapshot_t"]) for row in comp)
        print(f"final composition (snapshot {final_t}):")
        print(f"{'buffer':<20} {'task':>4} {'count':>8} {'ratio':>8}")
        for row in comp:
            if int(row["snapshot_t"]) == final_t:
                print(f"{row['buffer_kind']:<20} {row['task_label']:>4} "
                      f"{row['count']:>8} {float(row['ratio']):>8.4f}")
    else:
        print("no composition snapshots recorded")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curioreplay",
        description="Continual-RL replay buffer experiments with curiosity-driven "
                    "task-boundary detection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one experiment from a config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(func=_cmd_run)

    p_matrix = sub.add_parser("matrix", help="run one config over several seeds")
    p_matrix.add_argument("--config", required=True)
    p_matrix.add_argument("--seeds", type=int, required=True)
    p_matrix.add_argument("--out", default=None)
    p_matrix.set_defaults(func=_cmd_matrix)

    p_detect = sub.add_parser("detect", help="find task boundaries in a curiosity CSV")
    p_detect.add_argument("--input", required=True)
    p_detect.add_argument("--n", type=int, required=True)
    p_detect.add_argument("--k", type=int, required=True)
    p_detect.add_argument("--mf", type=float, required=True)
    p_detect.add_argument("--delta", type=float, default=1e-6)
    p_detect.set_defaults(func=_cmd_detect)

    p_analyze = sub.add_parser("analyze", help="summarize a finished run directory")
    p_analyze.add_argument("--run", required=True)
    p_analyze.set_defaults(func=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

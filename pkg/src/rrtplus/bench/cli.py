"""``rrtplus`` command line: run, summarize, render and gen-env."""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import traceback
import warnings
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..chain_env import (
    ChainRobot,
    Environment,
    GenerationError,
    make_cluttered_random,
    make_horn,
    preset_config,
)
from .render import render_svg
from .runner import path_file_name, read_csv, run_matrix, write_results
from .scenario import ScenarioError, load_scenario
from .stats import summarize_pairs, summarize_planners, summary_csv, summary_text

EXIT_OK, EXIT_USAGE, EXIT_SCENARIO, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rrtplus", description="Benchmark harness for the chain planners.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a scenario's planner x trial matrix")
    run.add_argument("scenario", help="scenario JSON file or bundled scenario name")
    run.add_argument("--out", required=True, type=Path, help="output directory")
    run.add_argument("--jobs", type=int, default=None,
                     help="worker processes (default: one per hardware thread)")
    run.add_argument("--seed", type=int, default=None, help="base seed (default: from scenario)")
    run.add_argument("--trials", type=int, default=None, help="override the scenario's trial count")
    run.add_argument("--deterministic", action="store_true",
                     help="sequential, sample-count termination; CSV is byte-reproducible")

    summ = sub.add_parser("summarize", help="statistics over a results CSV")
    summ.add_argument("csv", type=Path)
    summ.add_argument("--out", type=Path, default=None,
                      help="summary CSV path (default: <csv stem>.summary.csv)")

    ren = sub.add_parser("render", help="draw a solution as SVG")
    ren.add_argument("source", help="path JSON file, or results CSV with ':ROW' (1-based)")
    ren.add_argument("--out", required=True, type=Path)
    ren.add_argument("--raw", action="store_true", help="draw the unsimplified path")
    ren.add_argument("--spacing", type=float, default=0.25,
                     help="C-space distance between drawn poses")

    gen = sub.add_parser("gen-env", help="generate an environment fixture")
    kinds = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    cl = kinds.add_parser("cluttered", help="random segment obstacles")
    cl.add_argument("--seed", type=int, default=1)
    cl.add_argument("--obstacles", type=int, default=60)
    cl.add_argument("--min-length", type=float, default=0.1)
    cl.add_argument("--max-length", type=float, default=0.3)
    cl.add_argument("--clearance", type=float, default=0.02)
    cl.add_argument("--keep-links", default="12-30",
                    help="link counts whose presets must stay free, e.g. '16' or '12-30'")
    cl.add_argument("--keep-presets", default="straight,hook")
    cl.add_argument("--out", required=True, type=Path)
    hn = kinds.add_parser("horn", help="curling corridor")
    hn.add_argument("--gap", type=float, default=0.12)
    hn.add_argument("--flare", type=float, default=1.5)
    hn.add_argument("--tightness", type=float, default=1.0)
    hn.add_argument("--resolution", type=int, default=60)
    hn.add_argument("--check-links", type=int, default=16)
    hn.add_argument("--out", required=True, type=Path)
    return p


def _link_range(text: str) -> list[int]:
    try:
        if "-" in text:
            lo, hi = (int(v) for v in text.split("-", 1))
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad link-count list {text!r}") from None


def cmd_run(args) -> int:
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be positive")
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be positive")
    sc = load_scenario(args.scenario)
    if args.trials is not None:
        sc = dataclasses.replace(sc, trials=args.trials)
    sw = sc.build()
    outs = run_matrix(sc, args.seed, args.jobs, args.deterministic, world=sw)
    csv_path = write_results(args.out, sw, outs, args.deterministic)
    records = [o.record for o in outs]
    planners, pairs = summarize_planners(records), summarize_pairs(records)
    text = summary_text(planners, pairs)
    (args.out / f"{sc.id}.summary.txt").write_text(text, encoding="utf-8")
    (args.out / f"{sc.id}.summary.csv").write_text(summary_csv(planners, pairs), encoding="utf-8")
    sys.stdout.write(text)
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_summarize(args) -> int:
    if not args.csv.exists():
        raise UsageError(f"{args.csv} does not exist")
    records = read_csv(args.csv)
    if not records:
        raise UsageError(f"{args.csv} has no trial rows")
    planners, pairs = summarize_planners(records), summarize_pairs(records)
    sys.stdout.write(summary_text(planners, pairs))
    out = args.out or args.csv.with_suffix(".summary.csv")
    out.write_text(summary_csv(planners, pairs), encoding="utf-8")
    return EXIT_OK


def _load_path_file(source: str) -> dict:
    if ":" in source and not Path(source).exists():
        csv_name, row = source.rsplit(":", 1)
        csv_path = Path(csv_name)
        try:
            idx = int(row)
        except ValueError:
            raise UsageError(f"bad row number {row!r}") from None
        if not csv_path.exists():
            raise UsageError(f"{csv_path} does not exist")
        records = read_csv(csv_path)
        if not 1 <= idx <= len(records):
            raise UsageError(f"row {idx} out of range 1..{len(records)}")
        path_file = csv_path.parent / "paths" / path_file_name(records[idx - 1])
    else:
        path_file = Path(source)
    if not path_file.exists():
        raise UsageError(f"{path_file} does not exist")
    return json.loads(path_file.read_text(encoding="utf-8"))


def cmd_render(args) -> int:
    data = _load_path_file(args.source)
    env = Environment.loads(data["environment"])
    robot = ChainRobot(int(data["n_links"]), float(data["link_length"]))
    key = "path" if args.raw else "simplified_path"
    path = [np.asarray(q) for q in data.get(key) or []]
    title = f"{data.get('scenario', '')} {data.get('planner', '')} trial {data.get('trial', '')}"
    svg = render_svg(robot, env, np.asarray(data["q_init"]), np.asarray(data["q_goal"]),
                     path, pose_spacing=args.spacing, title=title.strip())
    args.out.write_text(svg, encoding="utf-8")
    return EXIT_OK


def cmd_gen_env(args) -> int:
    try:
        env = _generate(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except GenerationError as exc:
        raise UsageError(str(exc)) from None
    env.save(args.out)
    return EXIT_OK


def _generate(args) -> Environment:
    if args.kind == "cluttered":
        presets = [s for s in args.keep_presets.split(",") if s]
        keep = [(ChainRobot(n), preset_config(p, n))
                for n in _link_range(args.keep_links) for p in presets]
        env = make_cluttered_random(
            args.seed, args.obstacles, keep_clear=keep,
            length_range=(args.min_length, args.max_length), clearance=args.clearance,
        )
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            env = make_horn(gap=args.gap, flare=args.flare, tightness=args.tightness,
                            resolution=args.resolution, check_links=args.check_links)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
    return env


COMMANDS = {"run": cmd_run, "summarize": cmd_summarize, "render": cmd_render,
            "gen-env": cmd_gen_env}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rrtplus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"rrtplus: scenario error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

"""Execute scenario matrices and write per-trial results."""

from __future__ import annotations

import csv
import io
import json
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from ..planners import BASELINE_OF, solve
from .scenario import Scenario, ScenarioWorld

CSV_HEADER = (
    "scenario", "planner", "trial", "seed", "solved", "wall_time_s",
    "solved_stage", "samples", "raw_len", "simp_len",
)


@dataclass
class TrialRecord:
    scenario: str
    planner: str
    trial: int
    seed: int
    solved: bool
    wall_time: Optional[float]
    solved_stage: Optional[int]
    samples_total: int
    path_length_raw: Optional[float]
    path_length_simplified: Optional[float]

    def row(self) -> list[str]:
        return [
            self.scenario,
            self.planner,
            str(self.trial),
            str(self.seed),
            "1" if self.solved else "0",
            _fmt(self.wall_time),
            "" if self.solved_stage is None else str(self.solved_stage),
            str(self.samples_total),
            _fmt(self.path_length_raw),
            _fmt(self.path_length_simplified),
        ]

    @classmethod
    def from_row(cls, row: dict[str, str]) -> "TrialRecord":
        return cls(
            scenario=row["scenario"],
            planner=row["planner"],
            trial=int(row["trial"]),
            seed=int(row["seed"]),
            solved=row["solved"] == "1",
            wall_time=_parse(row["wall_time_s"]),
            solved_stage=int(row["solved_stage"]) if row["solved_stage"] else None,
            samples_total=int(row["samples"]),
            path_length_raw=_parse(row["raw_len"]),
            path_length_simplified=_parse(row["simp_len"]),
        )


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def _parse(s: str) -> Optional[float]:
    return float(s) if s else None


def planner_salt(planner: str) -> int:
    """Stable per-family salt; a "+" planner shares its baseline's stream."""
    family = BASELINE_OF.get(planner, planner)
    return zlib.crc32(family.encode("utf-8"))


def internal_seed(trial_seed: int, planner: str) -> int:
    seq = np.random.SeedSequence([trial_seed, planner_salt(planner)])
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


@dataclass
class TrialOutput:
    record: TrialRecord
    path: Optional[list[list[float]]]
    simplified_path: Optional[list[list[float]]]
    wall_time: float


def run_trial(sw: ScenarioWorld, planner: str, trial: int, base_seed: int,
              deterministic: bool = False) -> TrialOutput:
    sc = sw.scenario
    seed = base_seed + trial
    cfg = sc.config_for(planner, internal_seed(seed, planner), deterministic)
    result = solve(planner, sw.problem(cfg), cfg)
    record = TrialRecord(
        scenario=sc.id,
        planner=planner,
        trial=trial,
        seed=seed,
        solved=result.solved,
        wall_time=None if deterministic else result.wall_time,
        solved_stage=result.solved_stage if result.solved else None,
        samples_total=result.samples_total,
        path_length_raw=result.path_length_raw,
        path_length_simplified=result.path_length_simplified,
    )
    as_lists = lambda p: None if p is None else [list(map(float, q)) for q in p]
    return TrialOutput(record, as_lists(result.path), as_lists(result.simplified_path),
                       result.wall_time)


def warm_up(sw: ScenarioWorld) -> None:
    """Trigger kernel compilation/loading so the first timed trial is not penalised."""
    w = sw.world
    w.state_valid(sw.q_init)
    w.edge_valid(sw.q_init, sw.q_goal, 0.5)


# -- process pool plumbing --------------------------------------------------

_WORKER: dict = {}


def _init_worker(scenario: Scenario) -> None:
    sw = scenario.build()
    warm_up(sw)
    _WORKER["sw"] = sw


def _pool_task(args) -> TrialOutput:
    planner, trial, base_seed = args
    return run_trial(_WORKER["sw"], planner, trial, base_seed)


def cells(scenario: Scenario) -> list[tuple[str, int]]:
    """(planner, trial) pairs, trial-major so paired runs sit next to each other."""
    return [(p, t) for t in range(scenario.trials) for p in scenario.planners]


def run_matrix(
    scenario: Scenario,
    base_seed: Optional[int] = None,
    jobs: Optional[int] = 1,
    deterministic: bool = False,
    world: Optional[ScenarioWorld] = None,
) -> list[TrialOutput]:
    """Run every (planner, trial) cell; outputs come back in planner-then-trial order.

    ``deterministic`` forces sequential execution and sample-count termination.
    """
    base_seed = scenario.seed if base_seed is None else base_seed
    todo = cells(scenario)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if deterministic or jobs <= 1:
        sw = world if world is not None else scenario.build()
        warm_up(sw)
        outs = [run_trial(sw, p, t, base_seed, deterministic) for p, t in todo]
    else:
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(scenario,)) as ex:
            outs = list(ex.map(_pool_task, [(p, t, base_seed) for p, t in todo]))
    order = {p: i for i, p in enumerate(scenario.planners)}
    outs.sort(key=lambda o: (order[o.record.planner], o.record.trial))
    return outs


# -- files --------------------------------------------------------------------

def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def write_csv(path: Path, records: Iterable[TrialRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_csv(records))


def read_csv(path: Path) -> list[TrialRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"{path}: unexpected CSV header {reader.fieldnames}")
        return [TrialRecord.from_row(row) for row in reader]


def path_file_name(record: TrialRecord) -> str:
    safe = record.planner.replace("+", "plus")
    return f"{record.scenario}__{safe}__{record.trial:04d}.json"


def path_payload(sw: ScenarioWorld, out: TrialOutput) -> dict:
    """Self-contained description of one trial's solution (world included)."""
    sc = sw.scenario
    return {
        "scenario": sc.id,
        "planner": out.record.planner,
        "trial": out.record.trial,
        "seed": out.record.seed,
        "n_links": sc.n_links,
        "link_length": sw.world.robot.link_length,
        "clearance": sc.clearance,
        "environment": sw.world.env.dumps(),
        "q_init": list(map(float, sw.q_init)),
        "q_goal": list(map(float, sw.q_goal)),
        "path": out.path,
        "simplified_path": out.simplified_path,
    }


def write_results(out_dir: Path, sw: ScenarioWorld, outs: list[TrialOutput],
                  deterministic: bool = False) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths_dir = out_dir / "paths"
    paths_dir.mkdir(exist_ok=True)
    csv_path = out_dir / f"{sw.scenario.id}.csv"
    write_csv(csv_path, [o.record for o in outs])
    for o in outs:
        text = json.dumps(path_payload(sw, o), indent=1) + "\n"
        (paths_dir / path_file_name(o.record)).write_text(text, encoding="utf-8")
    if deterministic:
        # measured times cannot be reproduced bit for bit, so they live beside the CSV
        timings = {f"{o.record.planner}/{o.record.trial}": o.wall_time for o in outs}
        (out_dir / f"{sw.scenario.id}.timings.json").write_text(
            json.dumps(timings, indent=1) + "\n", encoding="utf-8"
        )
    return csv_path

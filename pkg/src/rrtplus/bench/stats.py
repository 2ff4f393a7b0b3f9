"""Aggregate trial records: per-planner statistics and paired sign tests."""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from ..planners import BASELINE_OF
from .runner import TrialRecord


@dataclass(frozen=True)
class SignTest:
    wins: int
    losses: int
    ties: int
    p_value: float

    @property
    def n(self) -> int:
        return self.wins + self.losses


def sign_test(a: Sequence[float], b: Sequence[float]) -> SignTest:
    """Two-sided sign test of paired values; ``wins`` counts ``a < b``.

    Values may be ``inf`` (a failed run); equal pairs, including two
    failures, are ties and are dropped.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("sign test needs paired samples of equal length")
    wins = int(np.sum(a < b))
    losses = int(np.sum(a > b))
    ties = int(a.size - wins - losses)
    p = 1.0 if wins + losses == 0 else float(binomtest(wins, wins + losses, 0.5).pvalue)
    return SignTest(wins, losses, ties, p)


@dataclass(frozen=True)
class PlannerSummary:
    scenario: str
    planner: str
    trials: int
    solved: int
    failure_rate: float
    mean_time: Optional[float]
    median_time: Optional[float]
    std_time: Optional[float]
    median_stage: Optional[float]
    median_samples: float
    mean_simp_len: Optional[float]


@dataclass(frozen=True)
class PairSummary:
    scenario: str
    baseline: str
    enhanced: str
    metric: str
    speedup: Optional[float]
    test: SignTest


def _maybe(values: list[float], fn) -> Optional[float]:
    return float(fn(values)) if values else None


def trial_cost(r: TrialRecord, metric: str) -> float:
    """Cost used for paired comparisons: time or samples, ``inf`` when unsolved."""
    if not r.solved:
        return math.inf
    if metric == "time":
        return float(r.wall_time)
    return float(r.samples_total)


def summarize_planners(records: Iterable[TrialRecord]) -> list[PlannerSummary]:
    groups: dict[tuple[str, str], list[TrialRecord]] = defaultdict(list)
    for r in records:
        groups[(r.scenario, r.planner)].append(r)
    out = []
    for (scenario, planner), rs in groups.items():
        ok = [r for r in rs if r.solved]
        times = [r.wall_time for r in ok if r.wall_time is not None]
        stages = [r.solved_stage for r in ok if r.solved_stage is not None]
        out.append(
            PlannerSummary(
                scenario=scenario,
                planner=planner,
                trials=len(rs),
                solved=len(ok),
                failure_rate=1.0 - len(ok) / len(rs),
                mean_time=_maybe(times, np.mean),
                median_time=_maybe(times, np.median),
                # population std; a single solved trial has spread 0
                std_time=_maybe(times, np.std),
                median_stage=_maybe(stages, np.median),
                median_samples=float(np.median([r.samples_total for r in rs])),
                mean_simp_len=_maybe(
                    [r.path_length_simplified for r in ok if r.path_length_simplified is not None],
                    np.mean,
                ),
            )
        )
    return out


def summarize_pairs(records: Iterable[TrialRecord]) -> list[PairSummary]:
    """Sign test for every (baseline, enhanced) pair present in a scenario.

    Trials are paired by trial index. Wall time is compared when recorded,
    otherwise sample counts (deterministic runs).
    """
    by_key: dict[tuple[str, str], dict[int, TrialRecord]] = defaultdict(dict)
    for r in records:
        by_key[(r.scenario, r.planner)][r.trial] = r
    out = []
    for (scenario, planner), enh in sorted(by_key.items()):
        base_name = BASELINE_OF.get(planner)
        if base_name is None or (scenario, base_name) not in by_key:
            continue
        base = by_key[(scenario, base_name)]
        shared = sorted(set(enh) & set(base))
        if not shared:
            continue
        timed = all(
            rec.wall_time is not None
            for rec in (*(enh[t] for t in shared), *(base[t] for t in shared))
            if rec.solved
        )
        metric = "time" if timed else "samples"
        a = [trial_cost(enh[t], metric) for t in shared]
        b = [trial_cost(base[t], metric) for t in shared]
        med_a, med_b = float(np.median(a)), float(np.median(b))
        speedup = med_b / med_a if math.isfinite(med_a) and med_a > 0 else None
        out.append(PairSummary(scenario, base_name, planner, metric, speedup, sign_test(a, b)))
    return out


def _num(x: Optional[float], digits: int = 6) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:.{digits}g}"


SUMMARY_HEADER = (
    "scenario", "planner", "trials", "solved", "failure_rate", "mean_time_s",
    "median_time_s", "std_time_s", "median_stage", "median_samples", "mean_simp_len",
)
PAIR_HEADER = (
    "scenario", "baseline", "enhanced", "metric", "speedup_of_medians",
    "wins", "losses", "ties", "sign_p",
)


def summary_csv(planners: list[PlannerSummary], pairs: list[PairSummary]) -> str:
    """Two CSV tables separated by a blank line: per planner, then per pair."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for s in planners:
        w.writerow([
            s.scenario, s.planner, s.trials, s.solved, repr(s.failure_rate),
            _exact(s.mean_time), _exact(s.median_time), _exact(s.std_time),
            _exact(s.median_stage), repr(s.median_samples), _exact(s.mean_simp_len),
        ])
    buf.write("\n")
    w.writerow(PAIR_HEADER)
    for p in pairs:
        w.writerow([
            p.scenario, p.baseline, p.enhanced, p.metric, _exact(p.speedup),
            p.test.wins, p.test.losses, p.test.ties, repr(p.test.p_value),
        ])
    return buf.getvalue()


def _exact(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def summary_text(planners: list[PlannerSummary], pairs: list[PairSummary]) -> str:
    """Aligned plain-text tables; times in seconds, blank where no trial solved."""
    rows = [("scenario", "planner", "solved", "fail", "mean_s", "median_s", "std_s",
             "med_stage", "med_samples")]
    for s in planners:
        rows.append((
            s.scenario, s.planner, f"{s.solved}/{s.trials}", f"{s.failure_rate:.2f}",
            _num(s.mean_time, 4), _num(s.median_time, 4), _num(s.std_time, 4),
            _num(s.median_stage, 3), _num(s.median_samples, 6),
        ))
    text = _align(rows)
    if pairs:
        prow = [("scenario", "baseline", "enhanced", "metric", "speedup", "W/L/T", "sign_p")]
        for p in pairs:
            prow.append((
                p.scenario, p.baseline, p.enhanced, p.metric, _num(p.speedup, 3),
                f"{p.test.wins}/{p.test.losses}/{p.test.ties}", f"{p.test.p_value:.3g}",
            ))
        text += "\n" + _align(prow)
    return text


def _align(rows: list[tuple]) -> str:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"

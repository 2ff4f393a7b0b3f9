"""Geometric per-stage budgets for the subspace progression."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

Unit = Literal["seconds", "samples"]


@dataclass(frozen=True)
class StageSchedule:
    """Budgets ``t_1..t_n`` with ``t_i = alpha * t_{i-1}`` summing to ``total``.

    In ``"samples"`` mode the budgets are integer sample counts instead of
    seconds.
    """

    total: float
    alpha: float
    n: int
    t0: float
    budgets: tuple[float, ...]
    unit: Unit = "seconds"

    def budget(self, stage: int) -> float:
        return self.budgets[stage - 1]


def _check_params(total: float, alpha: float, n: int) -> None:
    if n < 1:
        raise ValueError("a schedule needs at least one stage")
    if not alpha > 1.0:
        raise ValueError(f"alpha must exceed 1 (got {alpha})")
    if total < 0:
        raise ValueError("total budget must be non-negative")


def base_time(total: float, alpha: float, n: int) -> float:
    return (alpha - 1.0) / (alpha * (alpha**n - 1.0)) * total


def make_schedule(total: float, alpha: float, n: int) -> StageSchedule:
    _check_params(total, alpha, n)
    t0 = base_time(total, alpha, n)
    budgets = []
    t = t0
    for _ in range(n):
        t = alpha * t
        budgets.append(t)
    return StageSchedule(float(total), float(alpha), n, t0, tuple(budgets))


def make_count_schedule(total_samples: int, alpha: float, n: int) -> StageSchedule:
    """Integer sample budgets following the same geometric shape.

    Counts are differences of the rounded cumulative sums, so they add up to
    ``total_samples`` exactly.
    """
    _check_params(total_samples, alpha, n)
    real = make_schedule(float(total_samples), alpha, n)
    cumulative = np.rint(np.cumsum(real.budgets)).astype(np.int64)
    cumulative[-1] = int(total_samples)
    counts = np.diff(np.concatenate(([0], cumulative)))
    return StageSchedule(
        float(total_samples),
        float(alpha),
        n,
        real.t0,
        tuple(float(c) for c in counts),
        unit="samples",
    )


def zero_schedule(n: int, alpha: float = 2.0, unit: Unit = "seconds") -> StageSchedule:
    """Schedule whose stages all end immediately (only the final stage searches)."""
    return StageSchedule(0.0, float(alpha), n, 0.0, (0.0,) * n, unit=unit)


def stage_done(elapsed_in_stage: float, stage: int, schedule: StageSchedule) -> bool:
    """True once a stage has used its budget.

    The final stage never reports done: it keeps searching until the global
    timeout, so completeness matches the underlying planner.
    """
    if not 1 <= stage <= schedule.n:
        raise ValueError(f"stage {stage} outside [1, {schedule.n}]")
    if stage == schedule.n:
        return False
    return elapsed_in_stage >= schedule.budgets[stage - 1]

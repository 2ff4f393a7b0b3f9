"""Subspace progression: run a tree planner in flats of growing dimension.

Search starts on the line through ``q_init`` and ``q_goal``. When a stage's
budget runs out one more DoF is released, until the final stage samples the
whole box and runs until the global budget is spent. Trees and counters carry
over from stage to stage untouched.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..cspace import PlanProblem
from ..sampling import SubspaceSpec, compute_boundary_values, prioritized_sample, uniform_sample
from ..schedule import StageSchedule, make_count_schedule, make_schedule, stage_done, zero_schedule
from .core import PlannerConfig, PlanResult, StageStats


def release_order(policy, n: int, rng: np.random.Generator) -> np.ndarray:
    """Order in which DoFs leave the start-goal line.

    ``"random"`` draws a fresh permutation, ``"base-first"`` frees the joint
    nearest the base first, and an explicit sequence is used as given.
    """
    if isinstance(policy, str):
        if policy == "random":
            return rng.permutation(n)
        if policy == "base-first":
            return np.arange(n)
        raise ValueError(f"unknown prioritization {policy!r}")
    order = np.asarray(policy, dtype=np.int64)
    if sorted(order.tolist()) != list(range(n)):
        raise ValueError("explicit prioritization must be a permutation of 0..n-1")
    return order


def stage_schedule(cfg: PlannerConfig, problem: PlanProblem) -> StageSchedule:
    """Budgets for the ``n + 1`` stages (the last one is the full box)."""
    stages = problem.space.n + 1
    total = cfg.resolved_budget(problem)
    if cfg.termination == "samples":
        total = int(round(total))
        if total == 0:
            return zero_schedule(stages, cfg.alpha, "samples")
        return make_count_schedule(total, cfg.alpha, stages)
    if total == 0:
        return zero_schedule(stages, cfg.alpha)
    return make_schedule(total, cfg.alpha, stages)


def _no_prioritized_budget(cfg: PlannerConfig, problem: PlanProblem) -> bool:
    total = cfg.resolved_budget(problem)
    if cfg.termination == "samples":
        return int(round(total)) == 0
    return total == 0


class StagedSampler:
    """Sampler that walks through the prioritized stages.

    ``update`` is called once per planner iteration; it advances the stage
    while the current one is out of budget. The release order and the line
    bounds are computed on the first prioritized draw, so a run whose
    prioritized stages all have zero budget does the same work as the
    baseline.
    """

    def __init__(self, problem: PlanProblem, cfg: PlannerConfig,
                 schedule: Optional[StageSchedule] = None):
        self.problem = problem
        self.cfg = cfg
        self.space = problem.space
        self.q_init = problem.q_init
        self.q_goal = problem.q_goal
        self.schedule = schedule
        self.stats: list[StageStats] = []
        self.log: Optional[list[np.ndarray]] = None
        self.stage = 1
        self._spec: Optional[SubspaceSpec] = None
        self._final = False
        self._t0 = 0.0
        self._s0 = 0
        self._skipped = False

    @property
    def spec(self) -> SubspaceSpec:
        if self._spec is None:
            prio_rng = np.random.default_rng([self.cfg.seed, 1])
            priority = release_order(self.cfg.prioritization, self.space.n, prio_rng)
            r_min, r_max = compute_boundary_values(self.space, self.q_init, self.q_goal)
            self._spec = SubspaceSpec(priority, self.stage, r_min, r_max)
        return self._spec

    @property
    def priority(self) -> np.ndarray:
        return self.spec.priority

    def start(self, now: float) -> None:
        self._t0 = now
        self._s0 = 0
        if self.schedule is None and _no_prioritized_budget(self.cfg, self.problem):
            # every prioritized stage would end on the spot: go straight to the box;
            # their empty records are written in finish, off the clock
            self.stage = self.space.n + 1
            self._final = True
            self._skipped = True
            return
        if self.schedule is None:
            self.schedule = stage_schedule(self.cfg, self.problem)
        self.by_samples = self.schedule.unit == "samples"
        self.update(now, 0)

    def _close_stage(self, now: float, samples: int) -> None:
        self.stats.append(StageStats(self.stage, samples - self._s0, now - self._t0))

    def update(self, now: float, samples: int) -> None:
        if self._final:
            return
        while True:
            elapsed = (samples - self._s0) if self.by_samples else (now - self._t0)
            if not stage_done(elapsed, self.stage, self.schedule):
                return
            self._close_stage(now, samples)
            self.stage += 1
            if self._spec is not None:
                self._spec = self._spec.next()
            self._t0 = now
            self._s0 = samples
            if self.stage == self.schedule.n:
                self._final = True
                return

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self._final:
            q = uniform_sample(self.space, rng)
        else:
            q = prioritized_sample(self.space, self.q_init, self.q_goal, self.spec, rng)
        if self.log is not None:
            self.log.append(q)
        return q

    def finish(self, now: float, samples: int) -> list[StageStats]:
        if self._skipped:
            self.schedule = stage_schedule(self.cfg, self.problem)
            self.stats = [StageStats(i) for i in range(1, self.stage)]
            self._skipped = False
        self._close_stage(now, samples)
        return list(self.stats)


def subspace_enhance(
    base_planner: Callable[..., PlanResult],
    problem: PlanProblem,
    cfg: PlannerConfig,
    schedule: Optional[StageSchedule] = None,
    sampler_log: Optional[list] = None,
    **kwargs,
) -> PlanResult:
    """Run ``base_planner`` with subspace progression (the "+" variant).

    The base planner validates the problem, starts the clock and calls
    ``sampler.start``, exactly as it does for its own uniform sampler.
    """
    sampler = StagedSampler(problem, cfg, schedule)
    sampler.log = sampler_log
    return base_planner(problem, cfg, sampler=sampler, **kwargs)

"""Pieces shared by every tree planner: configuration, trees, results, steering."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Literal, Optional, Sequence, Union

import numpy as np

from ..cspace import PlanProblem, path_length
from ..nn import make_index
from ..sampling import uniform_sample

Prioritization = Union[Literal["random", "base-first"], Sequence[int]]


@dataclass
class PlannerConfig:
    """Planner knobs.

    ``termination="time"`` bounds a run by ``global_timeout`` seconds and
    splits ``subspace_budget`` seconds over the subspace stages.
    ``termination="samples"`` uses ``max_samples`` and a sample-count
    ``subspace_budget`` instead, which makes runs bit-reproducible.
    ``None`` for ``step_size``, ``edge_resolution`` or ``subspace_budget``
    selects a default derived from the problem; the default subspace budget
    is ``100 * n * budget_scale`` seconds.
    """

    step_size: Optional[float] = None
    goal_bias: float = 0.05
    edge_resolution: Optional[float] = None
    global_timeout: float = 10.0
    termination: Literal["time", "samples"] = "time"
    max_samples: int = 100_000
    alpha: float = 1.6
    subspace_budget: Optional[float] = None
    budget_scale: float = 1.0
    prioritization: Prioritization = "random"
    seed: int = 0
    nn: Literal["linear", "kdtree"] = "linear"
    simplify_iterations: int = 100
    init_temperature: float = 1e-3
    temperature_rate: float = 2.0
    max_fails: int = 10
    cost_threshold: float = math.inf

    def __post_init__(self) -> None:
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if self.edge_resolution is not None and not self.edge_resolution > 0:
            raise ValueError("edge_resolution must be positive")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValueError("goal_bias must lie in [0, 1]")
        if self.termination not in ("time", "samples"):
            raise ValueError(f"unknown termination mode {self.termination!r}")
        if not self.alpha > 1.0:
            raise ValueError("alpha must be greater than 1")
        if not self.budget_scale >= 0.0:
            raise ValueError("budget_scale must be non-negative")

    def resolved_step(self, problem: PlanProblem) -> float:
        if self.step_size is not None:
            return self.step_size
        return 0.1 * problem.space.diagonal / math.sqrt(problem.space.n)

    def resolved_resolution(self, problem: PlanProblem) -> float:
        if self.edge_resolution is not None:
            return self.edge_resolution
        return self.resolved_step(problem) / 10.0

    def resolved_budget(self, problem: PlanProblem) -> float:
        if self.subspace_budget is not None:
            return self.subspace_budget
        if self.termination == "samples":
            return 0.5 * self.max_samples
        # 100 s per DoF, shrunk by budget_scale for desk-scale runs
        return 100.0 * problem.space.n * self.budget_scale


@dataclass
class StageStats:
    stage: int
    samples: int = 0
    elapsed: float = 0.0


@dataclass
class PlanResult:
    path: Optional[list[np.ndarray]]
    wall_time: float
    samples_total: int
    solved_stage: Optional[int] = None
    per_stage: list[StageStats] = field(default_factory=list)
    path_length_raw: float = math.nan
    path_length_simplified: float = math.nan
    simplified_path: Optional[list[np.ndarray]] = None
    tree_sizes: tuple[int, ...] = ()
    counters: dict[str, int] = field(default_factory=dict)
    # the search trees, kept for inspection and tests
    trees: tuple["Tree", ...] = field(default=(), repr=False, compare=False)

    @property
    def solved(self) -> bool:
        return self.path is not None


class Tree:
    """Vertices, parent links and a nearest-neighbour index.

    ``stage`` records the search stage active when each vertex was added.
    """

    def __init__(self, root: np.ndarray, nn: str = "linear", stage: int = 0):
        self.dim = root.size
        self.vertices: list[np.ndarray] = []
        self.parent: list[int] = []
        self.stage: list[int] = []
        self.index = make_index(nn, self.dim)
        self.add(root, -1, stage)

    def __len__(self) -> int:
        return len(self.vertices)

    def add(self, q: np.ndarray, parent: int, stage: int = 0) -> int:
        vid = len(self.vertices)
        q = np.array(q, dtype=float)
        q.setflags(write=False)
        self.vertices.append(q)
        self.parent.append(parent)
        self.stage.append(stage)
        self.index.insert(q, vid)
        return vid

    def nearest(self, q: np.ndarray) -> int:
        return self.index.nearest(q)

    def path_to_root(self, vid: int) -> list[np.ndarray]:
        out = []
        while vid != -1:
            out.append(self.vertices[vid])
            vid = self.parent[vid]
        return out


def new_conf(q_near: np.ndarray, q_rand: np.ndarray, step: float) -> np.ndarray:
    """Move from ``q_near`` toward ``q_rand`` by at most ``step``."""
    delta = q_rand - q_near
    d = float(np.linalg.norm(delta))
    if d <= step:
        return np.array(q_rand, dtype=float)
    return q_near + delta * (step / d)


def check_edge(a: np.ndarray, b: np.ndarray, problem: PlanProblem, resolution: float) -> bool:
    """Every waypoint at spacing <= ``resolution`` (endpoints included) is valid."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = max(1, math.ceil(float(np.linalg.norm(b - a)) / resolution))
    if not problem.state_valid(b):
        return False
    for k in range(n):
        q = a + (k / n) * (b - a)
        if not problem.state_valid(q):
            return False
    return True


def edge_checker(problem: PlanProblem, cfg: PlannerConfig) -> Callable[[np.ndarray, np.ndarray], bool]:
    if problem.edge_valid is not None:
        return problem.edge_valid
    res = cfg.resolved_resolution(problem)
    return lambda a, b: check_edge(a, b, problem, res)


class UniformSampler:
    """Plain uniform sampling over the whole box; used by the baseline planners."""

    stage: Optional[int] = None

    def __init__(self, problem: PlanProblem, cfg: PlannerConfig):
        self.space = problem.space
        self.log: Optional[list[np.ndarray]] = None

    def start(self, now: float) -> None:
        pass

    def update(self, now: float, samples: int) -> None:
        pass

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        q = uniform_sample(self.space, rng)
        if self.log is not None:
            self.log.append(q)
        return q

    def finish(self, now: float, samples: int) -> list[StageStats]:
        return []


class Budget:
    """Global termination test, by wall clock or by sample count."""

    def __init__(self, cfg: PlannerConfig):
        self.by_samples = cfg.termination == "samples"
        self.limit = cfg.max_samples if self.by_samples else cfg.global_timeout

    def exhausted(self, elapsed: float, samples: int) -> bool:
        if self.by_samples:
            return samples >= self.limit
        return elapsed >= self.limit


def finish_result(
    path: Optional[list[np.ndarray]],
    t_start: float,
    samples: int,
    sampler,
    trees: Sequence[Tree],
    counters: Optional[dict[str, int]] = None,
) -> PlanResult:
    now = time.perf_counter()
    per_stage = sampler.finish(now, samples)
    return PlanResult(
        path=path,
        wall_time=now - t_start,
        samples_total=samples,
        solved_stage=sampler.stage if path is not None else None,
        per_stage=per_stage,
        path_length_raw=path_length(path) if path is not None else math.nan,
        tree_sizes=tuple(len(t) for t in trees),
        counters=dict(counters or {}),
        trees=tuple(trees),
    )


def trivial_result(problem: PlanProblem, sampler=None) -> PlanResult:
    stage = 1 if sampler is not None and sampler.stage is not None else None
    return PlanResult(
        path=[problem.q_init.copy()],
        wall_time=0.0,
        samples_total=0,
        solved_stage=stage,
        path_length_raw=0.0,
        tree_sizes=(1,),
    )


def simplify_path(
    path: Sequence[np.ndarray],
    edge_valid: Callable[[np.ndarray, np.ndarray], bool],
    rng: np.random.Generator,
    iterations: int,
) -> list[np.ndarray]:
    """Vertex reduction, random shortcutting, then vertex reduction again.

    ``iterations == 0`` returns the path unchanged.

    Each shortcut iteration picks two points uniformly by arc length; when they lie on
    different segments and the three edges ``vertex -> p``, ``p -> p'``,
    ``p' -> vertex`` are valid, the stretch between them is replaced by the
    straight edge. Length never increases and the endpoints never move.
    """
    pts = [np.asarray(p, dtype=float) for p in path]
    if iterations <= 0:
        return pts
    pts = reduce_vertices(pts, edge_valid)
    for _ in range(iterations):
        if len(pts) < 3:
            break
        seg = np.linalg.norm(np.diff(np.asarray(pts), axis=0), axis=1)
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        total = cum[-1]
        if total <= 0.0:
            break
        u, v = np.sort(rng.random(2) * total)
        i = min(int(np.searchsorted(cum, u, side="right")) - 1, len(seg) - 1)
        j = min(int(np.searchsorted(cum, v, side="right")) - 1, len(seg) - 1)
        if i == j:
            continue
        p = _point_on(pts[i], pts[i + 1], (u - cum[i]) / seg[i] if seg[i] > 0 else 0.0)
        p2 = _point_on(pts[j], pts[j + 1], (v - cum[j]) / seg[j] if seg[j] > 0 else 0.0)
        if not edge_valid(p, p2):
            continue
        head = [] if _same(p, pts[i]) else [p]
        tail = [] if _same(p2, pts[j + 1]) else [p2]
        if head and not edge_valid(pts[i], p):
            continue
        if tail and not edge_valid(p2, pts[j + 1]):
            continue
        candidate = pts[: i + 1] + head + tail + pts[j + 1 :]
        if path_length(candidate) <= path_length(pts):
            pts = candidate
    return reduce_vertices(pts, edge_valid)


def reduce_vertices(
    pts: Sequence[np.ndarray],
    edge_valid: Callable[[np.ndarray, np.ndarray], bool],
) -> list[np.ndarray]:
    """Greedy pass: from each kept vertex jump to the farthest vertex it sees directly."""
    pts = list(pts)
    if len(pts) < 3:
        return pts
    out = [pts[0]]
    i = 0
    last = len(pts) - 1
    while i < last:
        j = last
        while j > i + 1 and not edge_valid(pts[i], pts[j]):
            j -= 1
        out.append(pts[j])
        i = j
    # straight-line jumps never lengthen a path (triangle inequality)
    return out


def _point_on(a: np.ndarray, b: np.ndarray, s: float) -> np.ndarray:
    s = min(max(s, 0.0), 1.0)
    if s == 0.0:
        return a.copy()
    if s == 1.0:
        return b.copy()
    return a + s * (b - a)


def _same(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(np.array_equal(a, b))

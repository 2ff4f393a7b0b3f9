"""Planar hyper-redundant chain among segment obstacles.

The chain is anchored at ``base`` and its joint angles are relative: joint
``i`` rotates link ``i`` with respect to link ``i - 1``. Links have length
``1 / n_links`` by default so the reach stays 1 for every DoF count.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .cspace import ConfigSpace, DimensionError, PlanProblem, as_config

DEFAULT_WORKSPACE = (-1.2, -1.2, 1.2, 1.2)
DEFAULT_CLEARANCE = 0.01
# forward kinematics round-off (e.g. sin(pi) != 0) must not hide a contact
CONTACT_TOL = 1e-12


class GenerationError(RuntimeError):
    """An environment generator could not satisfy its constraints."""


@dataclass(frozen=True)
class ChainRobot:
    n_links: int
    link_length: Optional[float] = None
    base: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.n_links < 2:
            raise ValueError("a chain needs at least two links")
        if self.link_length is None:
            object.__setattr__(self, "link_length", 1.0 / self.n_links)
        if not self.link_length > 0:
            raise ValueError("link_length must be positive")

    @property
    def dof(self) -> int:
        return self.n_links

    def space(self) -> ConfigSpace:
        return ConfigSpace.uniform(self.n_links, -math.pi, math.pi)


@dataclass(frozen=True)
class Segment2D:
    p: tuple[float, float]
    q: tuple[float, float]

    def __post_init__(self) -> None:
        if tuple(self.p) == tuple(self.q):
            raise ValueError("degenerate segment")

    def as_row(self) -> np.ndarray:
        return np.array([*self.p, *self.q], dtype=float)


def segments_intersect(a: Segment2D, b: Segment2D) -> bool:
    """Closed-segment intersection; touching and collinear overlap count."""
    return bool(_kernels.seg_intersect(*map(float, (*a.p, *a.q, *b.p, *b.q))))


def segment_distance(a: Segment2D, b: Segment2D) -> float:
    return float(_kernels.seg_distance(*map(float, (*a.p, *a.q, *b.p, *b.q))))


def forward_kinematics(robot: ChainRobot, q: Sequence[float]) -> np.ndarray:
    """Joint positions, shape ``(n_links + 1, 2)``; row 0 is the base."""
    q = as_config(q)
    if q.size != robot.n_links:
        raise DimensionError(f"expected {robot.n_links} joint angles, got {q.size}")
    return forward_kinematics_batch(robot, q[None, :])[0]


def forward_kinematics_batch(robot: ChainRobot, qs: np.ndarray) -> np.ndarray:
    qs = np.atleast_2d(np.asarray(qs, dtype=float))
    theta = np.cumsum(qs, axis=1)
    steps = robot.link_length * np.stack((np.cos(theta), np.sin(theta)), axis=-1)
    pts = np.concatenate((np.zeros((qs.shape[0], 1, 2)), np.cumsum(steps, axis=1)), axis=1)
    return pts + np.asarray(robot.base, dtype=float)


@dataclass
class Environment:
    obstacles: np.ndarray
    name: str = "empty"
    seed: Optional[int] = None
    workspace: tuple[float, float, float, float] = DEFAULT_WORKSPACE
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        obs = np.asarray(self.obstacles, dtype=float).reshape(-1, 4)
        self.obstacles = np.ascontiguousarray(obs)
        self.workspace = tuple(float(v) for v in self.workspace)  # type: ignore[assignment]

    @property
    def segments(self) -> list[Segment2D]:
        return [Segment2D((r[0], r[1]), (r[2], r[3])) for r in self.obstacles]

    @property
    def box(self) -> np.ndarray:
        return np.asarray(self.workspace, dtype=float)

    @classmethod
    def empty(cls, workspace=DEFAULT_WORKSPACE) -> "Environment":
        return cls(np.empty((0, 4)), "empty", None, workspace)

    # -- fixture files -------------------------------------------------
    def dumps(self) -> str:
        lines = [f"# name: {self.name}"]
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        lines.append("# workspace: " + " ".join(repr(v) for v in self.workspace))
        lines.append("# params: " + json.dumps(self.params, sort_keys=True))
        for row in self.obstacles:
            lines.append(" ".join(repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps(), encoding="utf-8")

    @classmethod
    def loads(cls, text: str) -> "Environment":
        header: dict[str, str] = {}
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition(":")
                header[key.strip()] = value.strip()
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 4 coordinates, got {len(parts)}")
            rows.append([float(v) for v in parts])
        workspace = DEFAULT_WORKSPACE
        if "workspace" in header:
            workspace = tuple(float(v) for v in header["workspace"].split())
        seed = int(header["seed"]) if header.get("seed") not in (None, "", "None") else None
        params = json.loads(header["params"]) if header.get("params") else {}
        return cls(
            np.asarray(rows, dtype=float).reshape(-1, 4),
            header.get("name", "fixture"),
            seed,
            workspace,
            params,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Environment":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def is_valid_config(
    robot: ChainRobot,
    env: Environment,
    q: Sequence[float],
    clearance: float = 0.0,
    self_collision: bool = True,
) -> bool:
    """Collision-free test for one configuration.

    With ``clearance=0`` this is the contact test (segments closer than
    ``CONTACT_TOL`` touch). A positive
    clearance also rejects configurations where a link comes closer than
    ``clearance`` to an obstacle, to a non-adjacent link, or to the
    workspace border.
    """
    q = as_config(q)
    if q.size != robot.n_links:
        raise DimensionError(f"expected {robot.n_links} joint angles, got {q.size}")
    return bool(
        _kernels.config_clear(
            q, float(robot.link_length), float(robot.base[0]), float(robot.base[1]),
            env.obstacles, env.box, max(float(clearance), CONTACT_TOL), bool(self_collision),
        )
    )


def edge_displacement_bound(robot: ChainRobot, a: np.ndarray, b: np.ndarray) -> float:
    """Upper bound on how far any chain point moves along the segment ``a -> b``.

    Joint ``j`` carries ``n - j`` links, so rotating it by ``dq`` moves no
    point by more than ``|dq| * (n - j) * link_length``.
    """
    lever = robot.link_length * np.arange(robot.n_links, 0, -1)
    return float(np.abs(b - a) @ lever)


_ORDER_CACHE: dict[int, np.ndarray] = {}


def _order(n_steps: int) -> np.ndarray:
    order = _ORDER_CACHE.get(n_steps)
    if order is None:
        order = _kernels.check_order(n_steps)
        if len(_ORDER_CACHE) < 4096:
            _ORDER_CACHE[n_steps] = order
    return order


class ChainWorld:
    """A chain robot in an environment, exposing planner-facing predicates.

    ``state_valid`` keeps ``clearance`` away from everything. ``edge_valid``
    picks enough waypoints that no chain point moves more than
    ``clearance / 2`` between neighbouring ones, which certifies that the
    whole edge is contact-free under the exact test, not only its waypoints.
    """

    def __init__(
        self,
        robot: ChainRobot,
        env: Environment,
        clearance: float = DEFAULT_CLEARANCE,
        self_collision: bool = True,
    ):
        if clearance <= 0:
            raise ValueError("planning clearance must be positive")
        self.robot = robot
        self.env = env
        self.clearance = float(clearance)
        self.self_collision = self_collision
        self.space = robot.space()
        self._args = (
            float(robot.link_length), float(robot.base[0]), float(robot.base[1]),
            env.obstacles, env.box,
        )

    def state_valid(self, q: np.ndarray) -> bool:
        return bool(
            _kernels.config_clear(
                np.asarray(q, dtype=float), *self._args, self.clearance, self.self_collision
            )
        )

    def exact_valid(self, q: np.ndarray) -> bool:
        return bool(
            _kernels.config_clear(
                np.asarray(q, dtype=float), *self._args, CONTACT_TOL, self.self_collision
            )
        )

    def edge_steps(self, a: np.ndarray, b: np.ndarray, resolution: float) -> int:
        length = float(np.linalg.norm(b - a))
        by_resolution = math.ceil(length / resolution) if resolution > 0 else 1
        by_sweep = math.floor(edge_displacement_bound(self.robot, a, b) / self.clearance) + 1
        return max(1, by_resolution, by_sweep)

    def edge_valid(self, a: np.ndarray, b: np.ndarray, resolution: float) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        n_steps = self.edge_steps(a, b, resolution)
        return bool(
            _kernels.edge_clear(
                a, b, _order(n_steps), n_steps, *self._args,
                self.clearance, self.self_collision,
            )
        )

    def problem(
        self,
        q_init: Sequence[float],
        q_goal: Sequence[float],
        resolution: float,
        name: str = "chain",
    ) -> PlanProblem:
        return PlanProblem(
            space=self.space,
            q_init=as_config(q_init),
            q_goal=as_config(q_goal),
            state_valid=self.state_valid,
            edge_valid=lambda a, b: self.edge_valid(a, b, resolution),
            name=name,
        )

    def exact_problem(self, q_init, q_goal, name: str = "chain-exact") -> PlanProblem:
        """Same world under the zero-clearance contact test (for re-validation)."""
        return PlanProblem(self.space, as_config(q_init), as_config(q_goal), self.exact_valid, None, name)


# -- configuration presets -------------------------------------------------

def curve_config(
    n_links: int, base_angle: float, turn: float, turn_growth: float = 0.0
) -> np.ndarray:
    """Joint angles tracing a curve whose heading is
    ``base_angle + turn * s + turn_growth * s**2 / 2`` at arc length ``s``.

    The same curve is produced for every DoF count, so start/goal shapes are
    comparable across ``n_links``.
    """
    s_mid = (np.arange(n_links) + 0.5) / n_links
    heading = base_angle + turn * s_mid + 0.5 * turn_growth * s_mid**2
    return np.diff(np.concatenate(([0.0], heading)))


PRESETS: dict[str, dict[str, float]] = {
    "straight": {"base_angle": 0.0, "turn": 0.0, "turn_growth": 0.0},
    "hook": {"base_angle": 0.5 * math.pi, "turn": 0.75 * math.pi, "turn_growth": 0.0},
}


def preset_config(name: str, n_links: int, env: Optional[Environment] = None) -> np.ndarray:
    if name == "horn":
        if env is None or "centerline" not in env.params:
            raise ValueError("the 'horn' preset needs a horn environment")
        return curve_config(n_links, **env.params["centerline"])
    if name not in PRESETS:
        raise ValueError(f"unknown configuration preset {name!r}")
    return curve_config(n_links, **PRESETS[name])


# -- generators ------------------------------------------------------------

def _collides_with_any(env: Environment, keep_clear, clearance: float) -> bool:
    return any(not is_valid_config(robot, env, q, clearance) for robot, q in keep_clear)


def make_cluttered_random(
    seed: int,
    n_obstacles: int,
    workspace_box: Sequence[float] = DEFAULT_WORKSPACE,
    keep_clear: Iterable[tuple[ChainRobot, Sequence[float]]] = (),
    length_range: tuple[float, float] = (0.1, 0.3),
    clearance: float = 2 * DEFAULT_CLEARANCE,
    max_attempts_per_obstacle: int = 1000,
) -> Environment:
    """Random segments of bounded length, none touching the keep-clear chains.

    ``keep_clear`` lists the (robot, configuration) pairs that must stay
    valid, typically the scenario's start and goal for every DoF count it
    will be used with.
    """
    keep_clear = [(r, as_config(q)) for r, q in keep_clear]
    rng = np.random.default_rng(seed)
    box = tuple(float(v) for v in workspace_box)
    params = {
        "n_obstacles": n_obstacles,
        "length_range": list(length_range),
        "clearance": clearance,
    }
    rows: list[list[float]] = []
    attempts = 0
    while len(rows) < n_obstacles:
        if attempts >= max_attempts_per_obstacle * max(n_obstacles, 1):
            raise GenerationError(
                f"placed only {len(rows)} of {n_obstacles} obstacles; try fewer obstacles"
            )
        attempts += 1
        center = rng.uniform(box[:2], box[2:])
        length = rng.uniform(*length_range)
        angle = rng.uniform(0.0, math.pi)
        half = 0.5 * length * np.array([math.cos(angle), math.sin(angle)])
        p, q = center - half, center + half
        if np.any(np.minimum(p, q) < box[:2]) or np.any(np.maximum(p, q) > box[2:]):
            continue
        candidate = Environment(np.array([[*p, *q]]), workspace=box)
        if _collides_with_any(candidate, keep_clear, clearance):
            continue
        rows.append([float(p[0]), float(p[1]), float(q[0]), float(q[1])])
    return Environment(np.asarray(rows).reshape(-1, 4), "cluttered", seed, box, params)


def _centerline(base, base_angle, turn, turn_growth, length, samples):
    s = np.linspace(0.0, length, samples)
    heading = base_angle + turn * s + 0.5 * turn_growth * s**2
    ds = np.diff(s)
    mid = 0.5 * (heading[1:] + heading[:-1])
    steps = np.stack((np.cos(mid) * ds, np.sin(mid) * ds), axis=1)
    pts = np.vstack((np.zeros(2), np.cumsum(steps, axis=0))) + np.asarray(base)
    normal = np.stack((-np.sin(heading), np.cos(heading)), axis=1)
    return s, pts, normal


def make_horn(
    gap: float = 0.12,
    flare: float = 1.5,
    tightness: float = 1.0,
    resolution: int = 60,
    mouth: float = 0.3,
    length: float = 1.08,
    workspace_box: Sequence[float] = DEFAULT_WORKSPACE,
    check_links: int = 16,
    clearance: float = DEFAULT_CLEARANCE,
) -> Environment:
    """Two walls along a tightening spiral, forming a horn-shaped corridor.

    The corridor starts ``mouth`` along the curve from the base, is
    ``gap * (1 + flare)`` wide there and narrows to ``gap`` at the far end.
    ``tightness`` scales the curvature. The goal preset ``"horn"`` lays the
    chain along the corridor's centreline; if it is not valid for a
    ``check_links``-link chain a warning is issued.
    """
    centre = {
        "base_angle": 0.5 * math.pi,
        "turn": 2.0 * tightness,
        "turn_growth": 3.0 * tightness,
    }
    samples = max(int(resolution), 2)
    s, pts, normal = _centerline((0.0, 0.0), length=length, samples=samples + 1, **centre)
    keep = s >= mouth
    frac = (s[keep] - mouth) / max(length - mouth, 1e-12)
    half_width = 0.5 * gap * (1.0 + flare * (1.0 - frac))
    walls = []
    for side in (1.0, -1.0):
        line = pts[keep] + side * half_width[:, None] * normal[keep]
        walls.append(np.hstack((line[:-1], line[1:])))
    rows = np.vstack(walls)
    # drop zero-length pieces
    rows = rows[np.any(rows[:, :2] != rows[:, 2:], axis=1)]
    params = {
        "gap": gap,
        "flare": flare,
        "tightness": tightness,
        "resolution": samples,
        "mouth": mouth,
        "length": length,
        "centerline": centre,
    }
    env = Environment(rows, "horn", None, tuple(workspace_box), params)
    robot = ChainRobot(check_links)
    goal = preset_config("horn", check_links, env)
    goal_ok = is_valid_config(robot, env, goal, clearance)
    env.params["goal_valid"] = goal_ok
    if not goal_ok:
        warnings.warn(
            f"horn corridor does not admit the threaded goal (gap={gap}); it is closed",
            stacklevel=2,
        )
    return env

"""Subspace sampling along the start-goal line with prioritized DoF release.

A stage-``k`` subspace keeps every DoF in the constrained set locked to the
line ``q_init + r * (q_goal - q_init)`` (one shared scalar ``r``) while the
released DoFs vary over their full range. Stage 1 is the line itself; the
stage after the last DoF has been released is the whole box.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cspace import ConfigSpace, DimensionError, as_config, contains

BOUNDARY_TOL = 1e-9


class DegenerateLineError(ValueError):
    """q_init and q_goal coincide, so no start-goal line exists."""


def compute_boundary_values(
    space: ConfigSpace, q_init: Sequence[float], q_goal: Sequence[float]
) -> tuple[float, float]:
    """Range of the line parameter for which the start-goal line stays in the box.

    Every face ``x_i = lo_i`` / ``x_i = hi_i`` not parallel to the line is
    intersected with it; the intersections lying in the box (up to
    ``BOUNDARY_TOL``) are the two ends of the chord.
    """
    q_init = as_config(q_init)
    q_goal = as_config(q_goal)
    if q_init.size != space.n or q_goal.size != space.n:
        raise DimensionError("endpoints do not match the space dimension")
    if not (contains(space, q_init) and contains(space, q_goal)):
        raise ValueError("q_init and q_goal must lie in the space")
    d = q_goal - q_init
    if not np.any(d):
        raise DegenerateLineError("q_init equals q_goal; the line is undefined")

    r_min, r_max = 0.0, 1.0
    lo = space.lower - BOUNDARY_TOL
    hi = space.upper + BOUNDARY_TOL
    for i in range(space.n):
        if d[i] == 0.0:
            continue
        for face in (space.lower[i], space.upper[i]):
            # a subnormal component can push the hit past the double range
            with np.errstate(over="ignore"):
                t = (face - q_init[i]) / d[i]
            if not np.isfinite(t):
                continue
            with np.errstate(over="ignore", invalid="ignore"):
                p = q_init + t * d
            p[i] = face
            if np.all(p >= lo) and np.all(p <= hi):
                if t <= 0.0:
                    r_min = min(r_min, t)
                else:
                    r_max = max(r_max, t)

    return _pull_inside(space, q_init, d, r_min, 0.0), _pull_inside(space, q_init, d, r_max, 1.0)


def _pull_inside(space: ConfigSpace, q_init: np.ndarray, d: np.ndarray, r: float,
                 anchor: float) -> float:
    """Move ``r`` toward ``anchor`` until the line point passes the exact box test.

    The tolerance above can accept a chord end lying just outside the box.
    Steps double until a point passes, then 64 halvings against the last
    failing point take back nearly all of the overshoot.
    """
    r = float(r)
    if r == anchor or contains(space, q_init + r * d):
        return r
    outside, step = r, float(np.spacing(max(abs(r), abs(anchor))))
    while True:
        r = max(r - step, anchor) if r > anchor else min(r + step, anchor)
        if r == anchor or contains(space, q_init + r * d):
            break
        outside, step = r, step * 2.0
    inside = r
    for _ in range(64):
        mid = 0.5 * (inside + outside)
        if mid == inside or mid == outside:
            break
        if contains(space, q_init + mid * d):
            inside = mid
        else:
            outside = mid
    return inside


def line_sample(q_init: Sequence[float], q_goal: Sequence[float], r: float) -> np.ndarray:
    q_init = as_config(q_init)
    q_goal = as_config(q_goal)
    if q_init.shape != q_goal.shape:
        raise DimensionError("q_init and q_goal differ in length")
    if r == 1.0:
        return q_goal.copy()
    return (q_goal - q_init) * r + q_init


@dataclass(frozen=True)
class SubspaceSpec:
    """One stage of the prioritized release.

    ``priority`` is the release order: at stage ``k`` the first ``k - 1``
    entries are free and the rest stay on the line. ``stage == n + 1`` is the
    full box.
    """

    priority: np.ndarray
    stage: int
    r_min: float
    r_max: float

    def __post_init__(self) -> None:
        prio = np.asarray(self.priority, dtype=np.int64).reshape(-1)
        n = prio.size
        if sorted(prio.tolist()) != list(range(n)):
            raise ValueError("priority must be a permutation of 0..n-1")
        if not 1 <= self.stage <= n + 1:
            raise ValueError(f"stage {self.stage} outside [1, {n + 1}]")
        if self.r_min > 0.0 or self.r_max < 1.0:
            raise ValueError("r range must contain [0, 1]")
        prio.setflags(write=False)
        object.__setattr__(self, "priority", prio)
        mask = np.ones(n, dtype=bool)
        mask[prio[: self.stage - 1]] = False
        mask.setflags(write=False)
        object.__setattr__(self, "_mask", mask)
        released = np.flatnonzero(~mask)
        released.setflags(write=False)
        object.__setattr__(self, "_released", released)

    @property
    def n(self) -> int:
        return self.priority.size

    @property
    def constrained_mask(self) -> np.ndarray:
        return self._mask  # type: ignore[attr-defined]

    @property
    def constrained(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self._mask).tolist())  # type: ignore[attr-defined]

    @property
    def released(self) -> np.ndarray:
        """Free DoFs in index order."""
        return self._released  # type: ignore[attr-defined]

    @property
    def is_full_space(self) -> bool:
        return self.stage == self.n + 1

    def next(self) -> "SubspaceSpec":
        return SubspaceSpec(self.priority, self.stage + 1, self.r_min, self.r_max)


def uniform_sample(space: ConfigSpace, rng) -> np.ndarray:
    return space.lower + rng.random(space.n) * space.extent


def prioritized_sample(
    space: ConfigSpace,
    q_init: np.ndarray,
    q_goal: np.ndarray,
    spec: SubspaceSpec,
    rng,
) -> np.ndarray:
    """Draw one configuration from the stage subspace described by ``spec``."""
    if spec.n != space.n:
        raise DimensionError("subspace spec does not match the space dimension")
    if spec.is_full_space:
        return uniform_sample(space, rng)
    q_init = np.asarray(q_init, dtype=float)
    q_goal = np.asarray(q_goal, dtype=float)
    r = spec.r_min + rng.random() * (spec.r_max - spec.r_min)
    q = q_goal.copy() if r == 1.0 else (q_goal - q_init) * r + q_init
    free = spec.released
    if free.size:
        # released DoFs are drawn in index order
        q[free] = space.lower[free] + rng.random(free.size) * space.extent[free]
    return np.clip(q, space.lower, space.upper)


def flat_residual(
    q: Sequence[float],
    q_init: Sequence[float],
    q_goal: Sequence[float],
    constrained: np.ndarray | Sequence[int],
) -> float:
    """Largest deviation of the constrained coordinates from one shared line point.

    The line parameter is recovered from the constrained coordinate with the
    largest ``|q_goal_i - q_init_i|``; coordinates with a zero line direction
    must equal ``q_init_i``.
    """
    q = as_config(q)
    q_init = as_config(q_init)
    d = as_config(q_goal) - q_init
    idx = np.asarray(constrained)
    if idx.dtype == bool:
        idx = np.flatnonzero(idx)
    if idx.size == 0:
        return 0.0
    moving = idx[d[idx] != 0.0]
    if moving.size == 0:
        return float(np.max(np.abs(q[idx] - q_init[idx])))
    pivot = moving[np.argmax(np.abs(d[moving]))]
    r = (q[pivot] - q_init[pivot]) / d[pivot]
    return float(np.max(np.abs(q[idx] - (q_init[idx] + r * d[idx]))))

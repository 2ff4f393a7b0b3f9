"""Box-shaped configuration spaces and the elementary geometry on them."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

Config = np.ndarray
StateValidity = Callable[[np.ndarray], bool]
EdgeValidity = Callable[[np.ndarray, np.ndarray], bool]


class DimensionError(ValueError):
    """Raised when a configuration does not match the space dimension."""


def as_config(q: Sequence[float]) -> np.ndarray:
    return np.asarray(q, dtype=float).reshape(-1)


def _check_same_length(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")


@dataclass(frozen=True)
class ConfigSpace:
    """Axis-aligned box ``[lo_1, hi_1] x ... x [lo_n, hi_n]``.

    Bounds are closed; no coordinate is identified with another (joint angles
    do not wrap).
    """

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lo = as_config(self.lower)
        hi = as_config(self.upper)
        if lo.size < 1:
            raise ValueError("configuration space needs at least one dimension")
        if lo.shape != hi.shape:
            raise DimensionError("lower and upper bounds differ in length")
        if not np.all(lo < hi):
            raise ValueError("every lower bound must be strictly below its upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_bounds(cls, bounds: Sequence[tuple[float, float]]) -> "ConfigSpace":
        b = np.asarray(bounds, dtype=float).reshape(-1, 2)
        return cls(b[:, 0], b[:, 1])

    @classmethod
    def uniform(cls, n: int, lo: float = -np.pi, hi: float = np.pi) -> "ConfigSpace":
        return cls(np.full(n, lo), np.full(n, hi))

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def bounds(self) -> list[tuple[float, float]]:
        return list(zip(self.lower.tolist(), self.upper.tolist()))

    @property
    def extent(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.extent))

    def contains(self, q: Sequence[float]) -> bool:
        return contains(self, q)


def contains(space: ConfigSpace, q: Sequence[float]) -> bool:
    q = as_config(q)
    if q.size != space.n:
        raise DimensionError(f"expected {space.n} coordinates, got {q.size}")
    return bool(np.all(q >= space.lower) and np.all(q <= space.upper))


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    a = as_config(a)
    b = as_config(b)
    _check_same_length(a, b)
    return float(np.linalg.norm(b - a))


def interpolate(a: Sequence[float], b: Sequence[float], s: float) -> np.ndarray:
    a = as_config(a)
    b = as_config(b)
    _check_same_length(a, b)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"interpolation parameter {s} outside [0, 1]")
    if s == 1.0:
        return b.copy()
    return a + s * (b - a)


def path_length(path: Sequence[np.ndarray]) -> float:
    if len(path) < 2:
        return 0.0
    p = np.asarray(path, dtype=float)
    return float(np.linalg.norm(np.diff(p, axis=0), axis=1).sum())


@dataclass
class PlanProblem:
    """A single-query planning problem.

    ``edge_valid`` may be omitted, in which case planners fall back to a
    discretized check of ``state_valid`` at the configured edge resolution.
    """

    space: ConfigSpace
    q_init: np.ndarray
    q_goal: np.ndarray
    state_valid: StateValidity
    edge_valid: Optional[EdgeValidity] = None
    name: str = field(default="problem")

    def __post_init__(self) -> None:
        self.q_init = as_config(self.q_init)
        self.q_goal = as_config(self.q_goal)

    def validate(self) -> None:
        for label, q in (("q_init", self.q_init), ("q_goal", self.q_goal)):
            if not contains(self.space, q):
                raise ValueError(f"{label} lies outside the configuration space")
            if not self.state_valid(q):
                raise ValueError(f"{label} is in collision")

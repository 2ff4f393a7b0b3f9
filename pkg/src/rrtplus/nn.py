"""Nearest-vertex queries over a growing set of tree vertices."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree


def _row_distances(points: np.ndarray, q: np.ndarray) -> np.ndarray:
    return np.linalg.norm(points - q, axis=1)


def _argmin_lowest_id(dist: np.ndarray, ids: np.ndarray) -> int:
    best = dist.min()
    tied = ids[dist == best]
    return int(tied.min())


class NnIndex:
    """Exact nearest neighbour by linear scan; ties go to the lowest id."""

    def __init__(self, dim: int, capacity: int = 256):
        self.dim = dim
        self._points = np.empty((capacity, dim))
        self._ids = np.empty(capacity, dtype=np.int64)
        self._size = 0
        self._known: set[int] = set()

    def __len__(self) -> int:
        return self._size

    @property
    def points(self) -> np.ndarray:
        return self._points[: self._size]

    @property
    def ids(self) -> np.ndarray:
        return self._ids[: self._size]

    def insert(self, q: np.ndarray, vid: int) -> None:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.dim,):
            raise ValueError(f"expected a {self.dim}-dimensional point")
        if vid in self._known:
            raise KeyError(f"vertex id {vid} already present")
        if self._size == self._points.shape[0]:
            cap = 2 * self._size
            self._points = np.resize(self._points, (cap, self.dim))
            self._ids = np.resize(self._ids, cap)
        self._points[self._size] = q
        self._ids[self._size] = vid
        self._size += 1
        self._known.add(vid)

    def nearest(self, q: np.ndarray) -> int:
        if self._size == 0:
            raise LookupError("nearest() on an empty index")
        q = np.asarray(q, dtype=float)
        return _argmin_lowest_id(_row_distances(self.points, q), self.ids)


class KdNnIndex(NnIndex):
    """Linear-scan semantics accelerated by a periodically rebuilt kd-tree.

    Points inserted since the last rebuild sit in a buffer that is scanned
    linearly. Candidates within the best distance (plus a small slack) are
    re-scored with the same metric as :class:`NnIndex`, so answers match the
    linear scan exactly, ties included.
    """

    def __init__(self, dim: int, capacity: int = 256, min_buffer: int = 64):
        super().__init__(dim, capacity)
        self._tree: cKDTree | None = None
        self._tree_size = 0
        self._min_buffer = min_buffer

    def _maybe_rebuild(self) -> None:
        pending = self._size - self._tree_size
        if pending >= max(self._min_buffer, self._tree_size):
            self._tree = cKDTree(self.points.copy())
            self._tree_size = self._size

    def insert(self, q: np.ndarray, vid: int) -> None:
        super().insert(q, vid)
        self._maybe_rebuild()

    def nearest(self, q: np.ndarray) -> int:
        if self._size == 0:
            raise LookupError("nearest() on an empty index")
        q = np.asarray(q, dtype=float)
        if self._tree is None:
            return super().nearest(q)

        bound, _ = self._tree.query(q, k=1)
        buf = self._points[self._tree_size : self._size]
        if buf.shape[0]:
            bound = min(bound, float(_row_distances(buf, q).min()))
        radius = bound * (1.0 + 1e-9) + 1e-12
        cand = np.asarray(self._tree.query_ball_point(q, radius), dtype=np.int64)
        cand = np.concatenate((cand, np.arange(self._tree_size, self._size)))
        dist = _row_distances(self._points[cand], q)
        return _argmin_lowest_id(dist, self._ids[cand])


def make_index(kind: str, dim: int) -> NnIndex:
    if kind == "linear":
        return NnIndex(dim)
    if kind == "kdtree":
        return KdNnIndex(dim)
    raise ValueError(f"unknown nearest-neighbour index {kind!r}")

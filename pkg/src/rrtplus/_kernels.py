"""Compiled collision kernels for the planar chain.

Obstacles and links are 2-D segments stored as rows ``(x1, y1, x2, y2)``.
With ``clearance == 0`` a configuration collides iff segments touch (exact
orientation signs, collinear overlap included). With ``clearance > 0`` it
collides iff any segment pair is closer than ``clearance``.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _orient(ax, ay, bx, by, cx, cy):
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 0.0:
        return 1
    if v < 0.0:
        return -1
    return 0


@njit(cache=True)
def _on_segment(ax, ay, bx, by, px, py):
    # p is collinear with a-b; closed bounding-box test
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


@njit(cache=True)
def seg_intersect(ax, ay, bx, by, cx, cy, dx, dy):
    o1 = _orient(ax, ay, bx, by, cx, cy)
    o2 = _orient(ax, ay, bx, by, dx, dy)
    o3 = _orient(cx, cy, dx, dy, ax, ay)
    o4 = _orient(cx, cy, dx, dy, bx, by)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and _on_segment(ax, ay, bx, by, cx, cy):
        return True
    if o2 == 0 and _on_segment(ax, ay, bx, by, dx, dy):
        return True
    if o3 == 0 and _on_segment(cx, cy, dx, dy, ax, ay):
        return True
    if o4 == 0 and _on_segment(cx, cy, dx, dy, bx, by):
        return True
    return False


@njit(cache=True)
def _point_seg_dist(px, py, ax, ay, bx, by):
    ex = bx - ax
    ey = by - ay
    ll = ex * ex + ey * ey
    t = 0.0
    if ll > 0.0:
        t = ((px - ax) * ex + (py - ay) * ey) / ll
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    qx = ax + t * ex - px
    qy = ay + t * ey - py
    return math.sqrt(qx * qx + qy * qy)


@njit(cache=True)
def seg_distance(ax, ay, bx, by, cx, cy, dx, dy):
    if seg_intersect(ax, ay, bx, by, cx, cy, dx, dy):
        return 0.0
    d = _point_seg_dist(ax, ay, cx, cy, dx, dy)
    d = min(d, _point_seg_dist(bx, by, cx, cy, dx, dy))
    d = min(d, _point_seg_dist(cx, cy, ax, ay, bx, by))
    d = min(d, _point_seg_dist(dx, dy, ax, ay, bx, by))
    return d


@njit(cache=True)
def _pair_hits(ax, ay, bx, by, cx, cy, dx, dy, clearance):
    # bounding boxes further apart than the clearance cannot collide
    if max(ax, bx) + clearance < min(cx, dx) or max(cx, dx) + clearance < min(ax, bx):
        return False
    if max(ay, by) + clearance < min(cy, dy) or max(cy, dy) + clearance < min(ay, by):
        return False
    if clearance == 0.0:
        return seg_intersect(ax, ay, bx, by, cx, cy, dx, dy)
    return seg_distance(ax, ay, bx, by, cx, cy, dx, dy) < clearance


@njit(cache=True)
def chain_points(q, link_length, base_x, base_y, out):
    out[0, 0] = base_x
    out[0, 1] = base_y
    theta = 0.0
    for i in range(q.shape[0]):
        theta += q[i]
        out[i + 1, 0] = out[i, 0] + link_length * math.cos(theta)
        out[i + 1, 1] = out[i, 1] + link_length * math.sin(theta)


@njit(cache=True)
def points_clear(pts, obstacles, box, clearance, self_check):
    n = pts.shape[0] - 1
    for k in range(n + 1):
        x = pts[k, 0]
        y = pts[k, 1]
        if x < box[0] + clearance or x > box[2] - clearance:
            return False
        if y < box[1] + clearance or y > box[3] - clearance:
            return False
    for i in range(n):
        ax = pts[i, 0]
        ay = pts[i, 1]
        bx = pts[i + 1, 0]
        by = pts[i + 1, 1]
        for j in range(obstacles.shape[0]):
            if _pair_hits(
                ax, ay, bx, by,
                obstacles[j, 0], obstacles[j, 1], obstacles[j, 2], obstacles[j, 3],
                clearance,
            ):
                return False
    if self_check:
        for i in range(n):
            ax = pts[i, 0]
            ay = pts[i, 1]
            bx = pts[i + 1, 0]
            by = pts[i + 1, 1]
            for j in range(i + 2, n):
                if _pair_hits(
                    ax, ay, bx, by,
                    pts[j, 0], pts[j, 1], pts[j + 1, 0], pts[j + 1, 1],
                    clearance,
                ):
                    return False
    return True


@njit(cache=True)
def config_clear(q, link_length, base_x, base_y, obstacles, box, clearance, self_check):
    pts = np.empty((q.shape[0] + 1, 2))
    chain_points(q, link_length, base_x, base_y, pts)
    return points_clear(pts, obstacles, box, clearance, self_check)


@njit(cache=True)
def edge_clear(a, b, order, n_steps, link_length, base_x, base_y, obstacles, box,
               clearance, self_check):
    """Check the waypoints ``a + (k / n_steps) (b - a)`` in the given order."""
    pts = np.empty((a.shape[0] + 1, 2))
    q = np.empty(a.shape[0])
    for idx in range(order.shape[0]):
        k = order[idx]
        if k == n_steps:
            q[:] = b
        else:
            s = k / n_steps
            for i in range(a.shape[0]):
                q[i] = a[i] + s * (b[i] - a[i])
        chain_points(q, link_length, base_x, base_y, pts)
        if not points_clear(pts, obstacles, box, clearance, self_check):
            return False
    return True


def check_order(n_steps: int) -> np.ndarray:
    """Waypoint indices ``0..n_steps``: far endpoint first, then coarse-to-fine."""
    seen = np.zeros(n_steps + 1, dtype=bool)
    order = [n_steps, 0]
    seen[[0, n_steps]] = True
    stride = n_steps
    while stride > 1:
        stride = (stride + 1) // 2
        for k in range(stride, n_steps, stride):
            if not seen[k]:
                seen[k] = True
                order.append(k)
    order.extend(np.flatnonzero(~seen).tolist())
    return np.asarray(order, dtype=np.int64)

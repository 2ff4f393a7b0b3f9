"""Independent reference implementations used by the tests."""

import math

import numpy as np


def clip_interval(lower, upper, q_init, q_goal):
    """Parameter interval of the line q_init + r (q_goal - q_init) inside the box.

    Slab method: intersect the per-axis intervals where the line is inside.
    """
    lo, hi = -math.inf, math.inf
    for c_lo, c_hi, a, b in zip(lower, upper, q_init, q_goal):
        d = b - a
        if d == 0:
            continue
        with np.errstate(over="ignore"):
            t1, t2 = (c_lo - a) / d, (c_hi - a) / d
        lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
    return lo, hi


def schedule_by_sum(total, alpha, n):
    """t_i = c alpha^i with c fixed by the sum (geometric series closed form)."""
    c = total / sum(alpha**i for i in range(1, n + 1))
    return [c * alpha**i for i in range(1, n + 1)]


def fk_loop(q, link_length, base=(0.0, 0.0)):
    """Forward kinematics by explicit accumulation of absolute angles."""
    x, y = base
    theta = 0.0
    pts = [(x, y)]
    for angle in q:
        theta += angle
        x += link_length * math.cos(theta)
        y += link_length * math.sin(theta)
        pts.append((x, y))
    return np.array(pts)


def nearest_brute(points, q):
    best, best_d = -1, math.inf
    for i, p in enumerate(points):
        d = math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q)))
        if d < best_d:
            best, best_d = i, d
    return best


def sign_p_two_sided(wins, n):
    """Exact two-sided sign-test p-value from binomial coefficients."""
    k = min(wins, n - wins)
    tail = sum(math.comb(n, i) for i in range(k + 1)) / 2**n
    return min(1.0, 2 * tail)

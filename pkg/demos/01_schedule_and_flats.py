"""
Stage budgets and the flats they search
=======================================

A "+" planner splits its subspace budget into n + 1 stages whose lengths grow
by a factor alpha. Stage 1 samples only the start-goal line; every later
stage frees one more joint, and the last stage is the full box.

Run:  python demos/01_schedule_and_flats.py
"""

import numpy as np

from rrtplus import ConfigSpace, SubspaceSpec, compute_boundary_values, make_schedule, prioritized_sample
from rrtplus.planners import release_order
from rrtplus.sampling import flat_residual

n = 6
total = 100.0 * n * 0.0125  # default budget at the scale the bundled scenarios use

# Budgets grow geometrically, so most of the time goes to the wide late stages
for alpha in (1.6, 2.0):
    sched = make_schedule(total, alpha, n + 1)
    shares = np.array(sched.budgets) / total
    print(f"alpha={alpha}: t0={sched.t0:.4f}s  shares " + " ".join(f"{s:.3f}" for s in shares))

# A concrete 6-joint query in the usual [-pi, pi] box
space = ConfigSpace.uniform(n)
q_init = np.zeros(n)
q_goal = np.linspace(0.4, 2.4, n)
r_min, r_max = compute_boundary_values(space, q_init, q_goal)
print(f"\nline stays in the box for r in [{r_min:.3f}, {r_max:.3f}]")

rng = np.random.default_rng(7)
order = release_order("random", n, rng)
print("release order:", order.tolist())

# Sample each stage and check how far the still-locked joints sit from the line
spec = SubspaceSpec(order, 1, r_min, r_max)
while True:
    qs = np.array([prioritized_sample(space, q_init, q_goal, spec, rng) for _ in range(2000)])
    locked = np.flatnonzero(spec.constrained_mask)
    worst = max(flat_residual(q, q_init, q_goal, locked) for q in qs) if locked.size else 0.0
    spread = qs.std(axis=0)
    print(f"stage {spec.stage}: free={spec.released.tolist()!s:<20} "
          f"locked residual={worst:.1e}  per-joint std={np.round(spread, 2).tolist()}")
    if spec.is_full_space:
        break
    spec = spec.next()

"""
Threading the horn
==================

The horn world is a curling corridor whose centre line is the goal shape.
The chain starts straight at the mouth and must slide in. This script solves
one query with a baseline and its "+" variant, then renders both paths.

Run:  python demos/04_horn.py [--seed 3] [--out demo_output]
"""

import argparse
from pathlib import Path

from rrtplus.bench import load_scenario, write_svg
from rrtplus.planners import solve

ap = argparse.ArgumentParser()
ap.add_argument("--seed", type=int, default=3)
ap.add_argument("--out", type=Path, default=Path("demo_output"))
args = ap.parse_args()

sw = load_scenario("horn_n16").build()
robot, env = sw.world.robot, sw.world.env
args.out.mkdir(parents=True, exist_ok=True)

for name in ("BiT-RRT", "BiT-RRT+"):
    cfg = sw.scenario.config_for(name, args.seed)
    res = solve(name, sw.problem(cfg), cfg)
    if not res.solved:
        print(f"{name:<9} no path within {cfg.global_timeout}s ({res.samples_total} samples)")
        continue
    print(f"{name:<9} {res.wall_time:6.3f}s  stage {res.solved_stage}  "
          f"samples {res.samples_total}  length {res.path_length_raw:.2f} -> "
          f"{res.path_length_simplified:.2f} after shortcutting")
    out = write_svg(args.out / f"horn_{name.replace('+', 'plus')}.svg", robot, env,
                    sw.q_init, sw.q_goal, res.simplified_path, pose_spacing=0.4,
                    title=f"{name} in the horn")
    print("   wrote", out)

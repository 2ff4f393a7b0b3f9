"""
Baseline against "+" in clutter
===============================

Runs a short version of the bundled 16-link cluttered scenario and prints the
per-planner table plus the paired sign tests. Fifty trials (the CLI default
for this scenario) give stable p-values; a few trials show the trend.

Run:  python demos/03_cluttered_comparison.py [--trials 8]
"""

import argparse
import dataclasses

from rrtplus.bench import load_scenario, run_matrix
from rrtplus.bench.stats import summarize_pairs, summarize_planners, summary_text

ap = argparse.ArgumentParser()
ap.add_argument("--trials", type=int, default=8)
ap.add_argument("--planners", default="RRT-Connect,RRT+-Connect,BiT-RRT,BiT-RRT+")
args = ap.parse_args()

sc = load_scenario("cluttered_n16")
planners = tuple(args.planners.split(","))
# per-planner overrides only apply to planners that are still in the run
overrides = {k: v for k, v in sc.planner_config.items() if k in planners}
sc = dataclasses.replace(sc, trials=args.trials, planners=planners, planner_config=overrides)

print(f"{sc.id}: {sc.n_links} links, {len(sc.build_environment().obstacles)} obstacles, "
      f"{sc.trials} trials, timeout {sc.global_timeout}s\n")
outs = run_matrix(sc, jobs=1)
records = [o.record for o in outs]
print(summary_text(summarize_planners(records), summarize_pairs(records)))

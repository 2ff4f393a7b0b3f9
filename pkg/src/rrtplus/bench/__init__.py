"""Benchmark harness: scenarios, trial matrices, statistics and SVG renders."""

from .render import render_svg, sample_poses, write_svg
from .runner import CSV_HEADER, TrialRecord, internal_seed, read_csv, run_matrix, write_csv
from .scenario import Scenario, ScenarioError, load_scenario, scenario_from_dict
from .stats import sign_test, summarize_pairs, summarize_planners


def summarize(records):
    """Per-planner statistics and per-pair sign tests for a list of TrialRecord."""
    records = list(records)
    return summarize_planners(records), summarize_pairs(records)


__all__ = [
    "CSV_HEADER",
    "Scenario",
    "ScenarioError",
    "TrialRecord",
    "internal_seed",
    "load_scenario",
    "read_csv",
    "render_svg",
    "run_matrix",
    "sample_poses",
    "scenario_from_dict",
    "sign_test",
    "summarize",
    "summarize_pairs",
    "summarize_planners",
    "write_csv",
    "write_svg",
]

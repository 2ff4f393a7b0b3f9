"""Sampling-based planners that search subspaces of growing dimension first."""

from .cspace import ConfigSpace, PlanProblem, contains, distance, interpolate, path_length
from .planners import PLANNERS, PlannerConfig, PlanResult, solve
from .sampling import (
    SubspaceSpec,
    compute_boundary_values,
    line_sample,
    prioritized_sample,
    uniform_sample,
)
from .schedule import StageSchedule, make_schedule, stage_done

__version__ = "0.1.0"

__all__ = [
    "ConfigSpace",
    "PLANNERS",
    "PlanProblem",
    "PlanResult",
    "PlannerConfig",
    "StageSchedule",
    "SubspaceSpec",
    "compute_boundary_values",
    "contains",
    "distance",
    "interpolate",
    "line_sample",
    "make_schedule",
    "path_length",
    "prioritized_sample",
    "solve",
    "stage_done",
    "uniform_sample",
]

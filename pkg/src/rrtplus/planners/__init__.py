"""Tree planners and their subspace-progression ("+") variants."""

from __future__ import annotations

import functools
from typing import Callable, Optional

import numpy as np

from ..cspace import PlanProblem, path_length
from .core import (
    PlannerConfig,
    PlanResult,
    StageStats,
    Tree,
    UniformSampler,
    check_edge,
    edge_checker,
    new_conf,
    simplify_path,
)
from .subspace import StagedSampler, release_order, stage_schedule, subspace_enhance
from .trees import TransitionTest, bitrrt_plan, rrt_connect_plan, rrt_plan

BASELINES: dict[str, Callable[..., PlanResult]] = {
    "RRT": rrt_plan,
    "RRT-Connect": rrt_connect_plan,
    "BiT-RRT": bitrrt_plan,
}

ENHANCED_OF = {"RRT": "RRT+", "RRT-Connect": "RRT+-Connect", "BiT-RRT": "BiT-RRT+"}
BASELINE_OF = {v: k for k, v in ENHANCED_OF.items()}

PLANNERS: dict[str, Callable[..., PlanResult]] = dict(BASELINES)
for _base, _plus in ENHANCED_OF.items():
    PLANNERS[_plus] = functools.partial(subspace_enhance, BASELINES[_base])


def get_planner(name: str) -> Callable[..., PlanResult]:
    try:
        return PLANNERS[name]
    except KeyError:
        raise KeyError(f"unknown planner {name!r}; choose from {sorted(PLANNERS)}") from None


def solve(
    name: str,
    problem: PlanProblem,
    cfg: PlannerConfig,
    simplify: bool = True,
    **kwargs,
) -> PlanResult:
    """Plan with the named planner, then shortcut the path (outside the timed part)."""
    result = get_planner(name)(problem, cfg, **kwargs)
    if result.path is not None:
        if simplify:
            rng = np.random.default_rng([cfg.seed, 2])
            result.simplified_path = simplify_path(
                result.path, edge_checker(problem, cfg), rng, cfg.simplify_iterations
            )
        else:
            result.simplified_path = list(result.path)
        result.path_length_simplified = path_length(result.simplified_path)
    return result


__all__ = [
    "BASELINES",
    "BASELINE_OF",
    "ENHANCED_OF",
    "PLANNERS",
    "PlanResult",
    "PlannerConfig",
    "StageStats",
    "StagedSampler",
    "TransitionTest",
    "Tree",
    "UniformSampler",
    "bitrrt_plan",
    "check_edge",
    "edge_checker",
    "get_planner",
    "new_conf",
    "release_order",
    "rrt_connect_plan",
    "rrt_plan",
    "simplify_path",
    "solve",
    "stage_schedule",
    "subspace_enhance",
]

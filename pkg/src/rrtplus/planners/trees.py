"""RRT, RRT-Connect and bidirectional T-RRT.

All three loops draw their random targets from a sampler object, so the same
loop runs either over the whole box (baseline) or over a growing sequence of
subspaces (see :mod:`rrtplus.planners.subspace`).
"""

from __future__ import annotations

import math
import time
from typing import Callable, Optional

import numpy as np

from ..cspace import PlanProblem
from .core import (
    Budget,
    PlannerConfig,
    PlanResult,
    Tree,
    UniformSampler,
    edge_checker,
    finish_result,
    new_conf,
    trivial_result,
)

TRAPPED, ADVANCED, REACHED = 0, 1, 2

CostFn = Callable[[np.ndarray], float]


def _stage(sampler) -> int:
    return sampler.stage if sampler.stage is not None else 0


def _extend(tree: Tree, target: np.ndarray, step: float, edge_valid, stage: int,
            accept=None) -> tuple[int, int]:
    near = tree.nearest(target)
    q_near = tree.vertices[near]
    if np.array_equal(q_near, target):
        return REACHED, near
    q_new = new_conf(q_near, target, step)
    if accept is not None and not accept(tree, near, q_new):
        return TRAPPED, near
    if not edge_valid(q_near, q_new):
        return TRAPPED, near
    vid = tree.add(q_new, near, stage)
    return (REACHED if np.array_equal(q_new, target) else ADVANCED), vid


def _connect(tree: Tree, target: np.ndarray, step: float, edge_valid, stage: int,
             accept=None) -> tuple[int, int]:
    """Repeat steps toward ``target``; returns the final status and the last vertex reached."""
    status, last = ADVANCED, -1
    while status == ADVANCED:
        before = len(tree)
        status, vid = _extend(tree, target, step, edge_valid, stage, accept)
        if len(tree) > before or status == REACHED:
            last = vid
    return status, last


def _join(t_start_tree: Tree, v_start: int, t_goal_tree: Tree, v_goal: int) -> list[np.ndarray]:
    head = t_start_tree.path_to_root(v_start)[::-1]
    tail = t_goal_tree.path_to_root(v_goal)
    if np.array_equal(head[-1], tail[0]):
        tail = tail[1:]
    return [np.array(q) for q in head + tail]


def _prepare(problem: PlanProblem, cfg: PlannerConfig, sampler, t_start):
    problem.validate()
    t_start = time.perf_counter() if t_start is None else t_start
    sampler = sampler if sampler is not None else UniformSampler(problem, cfg)
    return t_start, sampler


def rrt_plan(
    problem: PlanProblem,
    cfg: PlannerConfig,
    sampler=None,
    t_start: Optional[float] = None,
) -> PlanResult:
    """Goal-biased RRT.

    Succeeds once a new vertex lies within one step of ``q_goal`` and the
    edge to ``q_goal`` is valid.
    """
    t_start, sampler = _prepare(problem, cfg, sampler, t_start)
    if np.array_equal(problem.q_init, problem.q_goal):
        return trivial_result(problem, sampler)
    rng = np.random.default_rng(cfg.seed)
    step = cfg.resolved_step(problem)
    edge_valid = edge_checker(problem, cfg)
    budget = Budget(cfg)
    q_goal = problem.q_goal

    sampler.start(t_start)
    tree = Tree(problem.q_init, cfg.nn, _stage(sampler))
    samples = 0
    while True:
        now = time.perf_counter()
        if budget.exhausted(now - t_start, samples):
            return finish_result(None, t_start, samples, sampler, [tree])
        sampler.update(now, samples)
        if rng.random() < cfg.goal_bias:
            q_rand = q_goal
        else:
            q_rand = sampler.sample(rng)
        samples += 1
        status, vid = _extend(tree, q_rand, step, edge_valid, _stage(sampler))
        if status == TRAPPED:
            continue
        q_new = tree.vertices[vid]
        if np.array_equal(q_new, q_goal):
            path = [np.array(q) for q in tree.path_to_root(vid)[::-1]]
            return finish_result(path, t_start, samples, sampler, [tree])
        if np.linalg.norm(q_goal - q_new) <= step and edge_valid(q_new, q_goal):
            goal_id = tree.add(q_goal, vid, _stage(sampler))
            path = [np.array(q) for q in tree.path_to_root(goal_id)[::-1]]
            return finish_result(path, t_start, samples, sampler, [tree])


def rrt_connect_plan(
    problem: PlanProblem,
    cfg: PlannerConfig,
    sampler=None,
    t_start: Optional[float] = None,
) -> PlanResult:
    """Bidirectional RRT with the greedy CONNECT heuristic on both trees.

    Each iteration drives one tree toward the random sample with repeated
    steps, then drives the other tree toward the newest vertex; the trees
    swap roles every iteration.
    """
    t_start, sampler = _prepare(problem, cfg, sampler, t_start)
    if np.array_equal(problem.q_init, problem.q_goal):
        return trivial_result(problem, sampler)
    rng = np.random.default_rng(cfg.seed)
    step = cfg.resolved_step(problem)
    edge_valid = edge_checker(problem, cfg)
    budget = Budget(cfg)

    sampler.start(t_start)
    start_tree = Tree(problem.q_init, cfg.nn, _stage(sampler))
    goal_tree = Tree(problem.q_goal, cfg.nn, _stage(sampler))
    ta, tb = start_tree, goal_tree
    samples = 0
    while True:
        now = time.perf_counter()
        if budget.exhausted(now - t_start, samples):
            return finish_result(None, t_start, samples, sampler, [start_tree, goal_tree])
        sampler.update(now, samples)
        q_rand = sampler.sample(rng)
        samples += 1
        stage = _stage(sampler)
        before = len(ta)
        status, va = _connect(ta, q_rand, step, edge_valid, stage)
        if len(ta) > before or status == REACHED:
            q_new = ta.vertices[va]
            status_b, vb = _connect(tb, q_new, step, edge_valid, stage)
            if status_b == REACHED:
                if ta is start_tree:
                    path = _join(ta, va, tb, vb)
                else:
                    path = _join(tb, vb, ta, va)
                return finish_result(path, t_start, samples, sampler, [start_tree, goal_tree])
        ta, tb = tb, ta


class TransitionTest:
    """T-RRT acceptance rule with multiplicative temperature adaptation.

    Downhill or flat moves always pass. Uphill moves pass with probability
    ``exp(-slope / temperature)``; each uphill acceptance cools the
    temperature and every ``max_fails`` consecutive rejections heat it by
    ``temperature_rate``.
    """

    def __init__(self, cost_fn: Optional[CostFn], cfg: PlannerConfig, rng: np.random.Generator):
        self.cost_fn = cost_fn
        self.temperature = cfg.init_temperature
        self.rate = cfg.temperature_rate
        self.max_fails = cfg.max_fails
        self.threshold = cfg.cost_threshold
        self.rng = rng
        self.fails = 0
        self.tested = 0
        self.accepted = 0
        self.c_min = math.inf
        self.c_max = -math.inf

    def cost(self, q: np.ndarray) -> float:
        c = 0.0 if self.cost_fn is None else float(self.cost_fn(q))
        self.c_min = min(self.c_min, c)
        self.c_max = max(self.c_max, c)
        return c

    def __call__(self, c_near: float, c_new: float, dist: float) -> bool:
        self.tested += 1
        if c_new > self.threshold:
            return False
        if c_new <= c_near:
            self.accepted += 1
            return True
        slope = (c_new - c_near) / max(dist, 1e-12)
        if self.rng.random() < math.exp(-slope / self.temperature):
            spread = self.c_max - self.c_min
            if spread > 0:
                self.temperature /= 2.0 ** ((c_new - c_near) / (0.1 * spread))
            self.fails = 0
            self.accepted += 1
            return True
        if self.fails > self.max_fails:
            self.temperature *= self.rate
            self.fails = 0
        else:
            self.fails += 1
        return False


def bitrrt_plan(
    problem: PlanProblem,
    cfg: PlannerConfig,
    sampler=None,
    cost_fn: Optional[CostFn] = None,
    t_start: Optional[float] = None,
) -> PlanResult:
    """Bidirectional T-RRT.

    One transition-tested step extends the active tree toward the sample; the
    other tree then greedily connects to the new vertex, every step also
    subject to the transition test. ``cost_fn=None`` is the uniform costmap,
    under which every test passes.
    """
    t_start, sampler = _prepare(problem, cfg, sampler, t_start)
    if np.array_equal(problem.q_init, problem.q_goal):
        return trivial_result(problem, sampler)
    rng = np.random.default_rng(cfg.seed)
    step = cfg.resolved_step(problem)
    edge_valid = edge_checker(problem, cfg)
    budget = Budget(cfg)
    test = TransitionTest(cost_fn, cfg, rng)

    sampler.start(t_start)
    start_tree = Tree(problem.q_init, cfg.nn, _stage(sampler))
    goal_tree = Tree(problem.q_goal, cfg.nn, _stage(sampler))
    costs = {id(start_tree): [test.cost(problem.q_init)], id(goal_tree): [test.cost(problem.q_goal)]}

    def accept(tree: Tree, near: int, q_new: np.ndarray) -> bool:
        c_near = costs[id(tree)][near]
        c_new = test.cost(q_new)
        ok = test(c_near, c_new, float(np.linalg.norm(q_new - tree.vertices[near])))
        if ok:
            # the vertex is appended right after a passing edge check
            pending[id(tree)] = c_new
        return ok

    pending: dict[int, float] = {}

    def grow(tree: Tree, target: np.ndarray, greedy: bool, stage: int) -> tuple[int, int]:
        status, vid = ADVANCED, -1
        while True:
            before = len(tree)
            status, vid = _extend(tree, target, step, edge_valid, stage, accept)
            if len(tree) > before:
                costs[id(tree)].append(pending.pop(id(tree)))
            else:
                pending.pop(id(tree), None)
            if not greedy or status != ADVANCED:
                return status, vid

    ta, tb = start_tree, goal_tree
    samples = 0
    while True:
        now = time.perf_counter()
        if budget.exhausted(now - t_start, samples):
            return finish_result(
                None, t_start, samples, sampler, [start_tree, goal_tree],
                {"extensions": test.tested, "accepted": test.accepted},
            )
        sampler.update(now, samples)
        q_rand = sampler.sample(rng)
        samples += 1
        stage = _stage(sampler)
        status, va = grow(ta, q_rand, False, stage)
        if status != TRAPPED:
            q_new = ta.vertices[va]
            status_b, vb = grow(tb, q_new, True, stage)
            if status_b == REACHED:
                if ta is start_tree:
                    path = _join(ta, va, tb, vb)
                else:
                    path = _join(tb, vb, ta, va)
                return finish_result(
                    path, t_start, samples, sampler, [start_tree, goal_tree],
                    {"extensions": test.tested, "accepted": test.accepted},
                )
        ta, tb = tb, ta

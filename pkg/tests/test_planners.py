import math

import numpy as np
import pytest

from conftest import box_problem
from rrtplus.chain_env import ChainRobot, ChainWorld, Environment, make_cluttered_random, preset_config
from rrtplus.cspace import ConfigSpace, PlanProblem, distance, path_length
from rrtplus.planners import (
    BASELINES,
    ENHANCED_OF,
    PLANNERS,
    PlannerConfig,
    TransitionTest,
    bitrrt_plan,
    check_edge,
    new_conf,
    release_order,
    rrt_connect_plan,
    rrt_plan,
    simplify_path,
    solve,
    subspace_enhance,
)
from rrtplus.sampling import SubspaceSpec, flat_residual

ALL = sorted(PLANNERS)
PLUS = sorted(ENHANCED_OF.values())

QUICK = dict(termination="samples", max_samples=5000)


def wall_with_gap(q):
    return 0.45 <= q[0] <= 0.55 and not 0.8 <= q[1] <= 0.9


def enclosed_goal(q):
    in_outer = 0.75 <= q[0] <= 1.0 and 0.75 <= q[1] <= 1.0
    in_inner = 0.85 < q[0] < 0.95 and 0.85 < q[1] < 0.95
    return in_outer and not in_inner


def assert_valid_path(path, problem, resolution):
    np.testing.assert_array_equal(path[0], problem.q_init)
    np.testing.assert_array_equal(path[-1], problem.q_goal)
    for a, b in zip(path, path[1:]):
        assert check_edge(a, b, problem, resolution)


def test_new_conf_examples():
    np.testing.assert_array_equal(new_conf(np.zeros(2), np.array([0.0, 0.5]), 1.0), [0, 0.5])
    np.testing.assert_array_equal(new_conf(np.zeros(2), np.array([2.0, 0.0]), 1.0), [1, 0])
    np.testing.assert_allclose(new_conf(np.zeros(2), np.array([3.0, 4.0]), 2.5), [1.5, 2.0])


@pytest.mark.parametrize("name", ALL)
def test_empty_box_is_solved_with_exact_endpoints(name):
    problem = box_problem((0.1, 0.1), (0.9, 0.9))
    cfg = PlannerConfig(seed=3, **QUICK)
    result = solve(name, problem, cfg)
    assert result.solved
    assert_valid_path(result.path, problem, cfg.resolved_resolution(problem))
    assert_valid_path(result.simplified_path, problem, cfg.resolved_resolution(problem))
    assert result.path_length_simplified <= result.path_length_raw + 1e-12


@pytest.mark.parametrize("name", ALL)
def test_start_equals_goal_is_trivial(name):
    problem = box_problem((0.3, 0.3), (0.3, 0.3))
    result = PLANNERS[name](problem, PlannerConfig(**QUICK))
    assert result.solved and len(result.path) == 1
    assert result.samples_total == 0
    if name in PLUS:
        assert result.solved_stage == 1


@pytest.mark.parametrize("name", ALL)
def test_wall_with_gap(name):
    problem = box_problem((0.1, 0.2), (0.9, 0.2), blocked=wall_with_gap)
    cfg = PlannerConfig(seed=1, termination="samples", max_samples=20000)
    result = solve(name, problem, cfg)
    assert result.solved
    assert_valid_path(result.path, problem, cfg.resolved_resolution(problem))
    for q in result.path:
        assert problem.state_valid(q)
    if name in PLUS:
        # the start-goal segment crosses the wall, so the line stage cannot succeed
        assert result.solved_stage >= 2


@pytest.mark.parametrize("name", ALL)
def test_enclosed_goal_fails_at_budget(name):
    problem = box_problem((0.1, 0.1), (0.9, 0.9), blocked=enclosed_goal)
    cfg = PlannerConfig(seed=0, termination="samples", max_samples=800)
    result = PLANNERS[name](problem, cfg)
    assert not result.solved
    assert result.samples_total == 800
    assert result.solved_stage is None


def test_time_budget_failure_respects_timeout():
    problem = box_problem((0.1, 0.1), (0.9, 0.9), blocked=enclosed_goal)
    result = rrt_plan(problem, PlannerConfig(global_timeout=0.05))
    assert not result.solved and result.wall_time >= 0.05 and result.samples_total > 0


def test_invalid_endpoint_is_rejected():
    problem = box_problem((0.5, 0.5), (0.9, 0.2), blocked=wall_with_gap)
    with pytest.raises(ValueError):
        rrt_plan(problem, PlannerConfig(**QUICK))


def test_bitrrt_uniform_cost_accepts_everything():
    problem = box_problem((0.1, 0.1), (0.9, 0.9))
    result = bitrrt_plan(problem, PlannerConfig(seed=2, **QUICK))
    assert result.solved
    assert result.counters["accepted"] == result.counters["extensions"] > 0


def test_bitrrt_cluttered_chain_path_is_valid():
    robot = ChainRobot(8)
    qi, qg = preset_config("straight", 8), preset_config("hook", 8)
    env = make_cluttered_random(4, 15, keep_clear=[(robot, qi), (robot, qg)])
    world = ChainWorld(robot, env)
    cfg = PlannerConfig(seed=0, termination="samples", max_samples=20000)
    problem = world.problem(qi, qg, cfg.resolved_resolution(world.problem(qi, qg, 1)))
    result = bitrrt_plan(problem, cfg)
    assert result.solved
    exact = world.exact_problem(qi, qg)
    assert_valid_path(result.path, exact, cfg.resolved_resolution(problem) / 2)


def test_bitrrt_cost_ramp_rejects_uphill_moves():
    problem = box_problem((0.1, 0.5), (0.9, 0.5))
    cfg = PlannerConfig(seed=0, init_temperature=1e-6, termination="samples", max_samples=300)
    result = bitrrt_plan(problem, cfg, cost_fn=lambda q: float(q[0]))
    assert result.counters["accepted"] < result.counters["extensions"]


def test_transition_test_rule():
    cfg = PlannerConfig(init_temperature=0.5, temperature_rate=2.0, max_fails=2)
    test = TransitionTest(None, cfg, np.random.default_rng(0))
    assert test(1.0, 0.5, 0.1) and test(1.0, 1.0, 0.1)
    # steep climbs at low temperature are essentially never accepted
    test.temperature = 1e-9
    assert not any(test(0.0, 1.0, 0.1) for _ in range(10))
    assert test.temperature > 1e-9  # heated after repeated failures
    capped = TransitionTest(None, PlannerConfig(cost_threshold=2.0), np.random.default_rng(0))
    assert not capped(0.0, 3.0, 0.1)


def test_transition_acceptance_frequency_matches_rule():
    cfg = PlannerConfig(init_temperature=1.0, max_fails=10**9)
    test = TransitionTest(None, cfg, np.random.default_rng(1))
    test.c_min = test.c_max = 0.0  # keep the temperature fixed
    trials = 20000
    hits = sum(test(0.0, 0.05, 0.1) for _ in range(trials))
    assert hits / trials == pytest.approx(math.exp(-0.5), abs=0.015)


# -- subspace progression ------------------------------------------------


@pytest.mark.parametrize("n", [2, 5, 12, 20])
@pytest.mark.parametrize("name", PLUS)
def test_empty_world_solves_on_the_line(name, n):
    robot = ChainRobot(n)
    world = ChainWorld(robot, Environment.empty())
    qi, qg = preset_config("straight", n), preset_config("hook", n)
    # the first stage gets a geometric sliver of the budget, so make the budget large
    cfg = PlannerConfig(seed=n, termination="samples", max_samples=2 * 10**6,
                        subspace_budget=10**6)
    problem = world.problem(qi, qg, cfg.resolved_resolution(world.problem(qi, qg, 1)))
    result = solve(name, problem, cfg)
    assert result.solved_stage == 1
    assert result.path_length_simplified == pytest.approx(distance(qi, qg), rel=1e-9)
    assert len(result.simplified_path) == 2


def test_release_order_policies():
    rng = np.random.default_rng(0)
    assert release_order("base-first", 4, rng).tolist() == [0, 1, 2, 3]
    assert sorted(release_order("random", 6, rng).tolist()) == list(range(6))
    assert release_order([2, 0, 1], 3, rng).tolist() == [2, 0, 1]
    with pytest.raises(ValueError):
        release_order([0, 0, 1], 3, rng)
    with pytest.raises(ValueError):
        release_order("greedy", 3, rng)


def _staged_run(name, seed, n=6, max_samples=3000, prioritization="random"):
    robot = ChainRobot(n)
    qi, qg = preset_config("straight", n), preset_config("hook", n)
    env = make_cluttered_random(seed, 12, keep_clear=[(robot, qi), (robot, qg)])
    world = ChainWorld(robot, env)
    cfg = PlannerConfig(seed=seed, termination="samples", max_samples=max_samples,
                        subspace_budget=max_samples // 2, alpha=1.3,
                        prioritization=prioritization)
    problem = world.problem(qi, qg, cfg.resolved_resolution(world.problem(qi, qg, 1)))
    return PLANNERS[name](problem, cfg), problem, cfg


@pytest.mark.parametrize("seed", range(4))
@pytest.mark.parametrize("name", PLUS)
def test_stage_invariants(name, seed):
    result, problem, cfg = _staged_run(name, seed)
    n = problem.space.n
    stages = [s.stage for s in result.per_stage]
    assert stages == list(range(1, len(stages) + 1))
    if result.solved:
        assert result.solved_stage == stages[-1]
    priority = release_order(cfg.prioritization, n, np.random.default_rng([cfg.seed, 1]))
    for tree in result.trees:
        # vertices are appended in time order, so stage tags never decrease
        assert all(a <= b for a, b in zip(tree.stage, tree.stage[1:]))
        # every vertex hangs off an earlier one: nothing is lost across stages
        assert tree.parent[0] == -1
        assert all(0 <= p < v for v, p in enumerate(tree.parent) if v)
        for q, k in zip(tree.vertices, tree.stage):
            if k <= n:
                mask = SubspaceSpec(priority, k, -1.0, 2.0).constrained_mask
                assert flat_residual(q, problem.q_init, problem.q_goal, mask) < 1e-9


@pytest.mark.parametrize("name", PLUS)
def test_planning_is_deterministic_in_sample_mode(name):
    r1, _, _ = _staged_run(name, 7)
    r2, _, _ = _staged_run(name, 7)
    assert r1.samples_total == r2.samples_total and r1.solved == r2.solved
    assert r1.tree_sizes == r2.tree_sizes
    if r1.solved:
        np.testing.assert_array_equal(np.array(r1.path), np.array(r2.path))


@pytest.mark.parametrize("base", sorted(BASELINES))
def test_zero_budget_reduces_to_baseline(base):
    n = 6
    robot = ChainRobot(n)
    qi, qg = preset_config("straight", n), preset_config("hook", n)
    env = make_cluttered_random(9, 15, keep_clear=[(robot, qi), (robot, qg)])
    world = ChainWorld(robot, env)
    cfg = PlannerConfig(seed=11, termination="samples", max_samples=1500, subspace_budget=0)
    problem = world.problem(qi, qg, cfg.resolved_resolution(world.problem(qi, qg, 1)))
    log_plus = []
    plus = subspace_enhance(BASELINES[base], problem, cfg, sampler_log=log_plus)
    from rrtplus.planners.core import UniformSampler

    sampler = UniformSampler(problem, cfg)
    sampler.log = []
    baseline = BASELINES[base](problem, cfg, sampler=sampler)
    np.testing.assert_array_equal(np.array(log_plus), np.array(sampler.log))
    assert plus.samples_total == baseline.samples_total
    assert plus.solved == baseline.solved
    if plus.solved:
        np.testing.assert_array_equal(np.array(plus.path), np.array(baseline.path))
        assert plus.solved_stage == n + 1


# -- simplification and edge checks --------------------------------------


def test_simplify_straight_path_is_unchanged_in_length():
    problem = box_problem((0.1, 0.1), (0.9, 0.9))
    path = [np.array([0.1, 0.1]) + s * np.array([0.8, 0.8]) for s in np.linspace(0, 1, 6)]
    out = simplify_path(path, lambda a, b: check_edge(a, b, problem, 0.01),
                        np.random.default_rng(0), 50)
    assert path_length(out) == pytest.approx(path_length(path), rel=1e-12)


def test_simplify_l_shaped_detour():
    problem = box_problem((0.1, 0.1), (0.9, 0.9))
    path = [np.array([0.1, 0.1]), np.array([0.9, 0.1]), np.array([0.9, 0.9])]
    out = simplify_path(path, lambda a, b: check_edge(a, b, problem, 0.01),
                        np.random.default_rng(0), 100)
    chord = distance(path[0], path[-1])
    assert path_length(out) == pytest.approx(chord, rel=0.01)
    np.testing.assert_array_equal(out[0], path[0])
    np.testing.assert_array_equal(out[-1], path[-1])


def test_simplify_respects_obstacles():
    problem = box_problem((0.1, 0.2), (0.9, 0.2), blocked=wall_with_gap)
    path = [np.array(p) for p in [(0.1, 0.2), (0.4, 0.85), (0.6, 0.85), (0.9, 0.2)]]
    edge = lambda a, b: check_edge(a, b, problem, 0.005)
    out = simplify_path(path, edge, np.random.default_rng(0), 200)
    assert all(edge(a, b) for a, b in zip(out, out[1:]))
    assert path_length(out) <= path_length(path)


def test_simplify_zero_iterations_is_identity():
    path = [np.array([0.0, 0.0]), np.array([1.0, 0.0]), np.array([1.0, 1.0])]
    out = simplify_path(path, lambda a, b: True, np.random.default_rng(0), 0)
    np.testing.assert_array_equal(np.array(out), np.array(path))


def test_check_edge_examples():
    blocked = lambda q: q[0] < 0.2
    problem = box_problem((0.5, 0.5), (0.6, 0.5), blocked=blocked)
    assert not check_edge(np.array([0.1, 0.1]), np.array([0.15, 0.1]), problem, 0.01)
    q = np.array([0.5, 0.5])
    assert check_edge(q, q, problem, 0.01)


def test_thin_wall_can_slip_between_waypoints():
    # a wall thinner than the waypoint spacing is missed; finer spacing catches it
    thin = lambda q: 0.5003 <= q[0] <= 0.5006
    problem = box_problem((0.1, 0.5), (0.9, 0.5), blocked=thin)
    a, b = np.array([0.1, 0.5]), np.array([0.9, 0.5])
    assert check_edge(a, b, problem, 0.01)
    assert not check_edge(a, b, problem, 0.0003 / 2)


def test_config_validation():
    with pytest.raises(ValueError):
        PlannerConfig(goal_bias=1.5)
    with pytest.raises(ValueError):
        PlannerConfig(step_size=0)
    with pytest.raises(ValueError):
        PlannerConfig(alpha=1.0)
    problem = box_problem((0.1, 0.1), (0.9, 0.9))
    cfg = PlannerConfig()
    assert cfg.resolved_step(problem) == pytest.approx(0.1)
    assert cfg.resolved_resolution(problem) == pytest.approx(0.01)
    assert cfg.resolved_budget(problem) == pytest.approx(200.0)
    assert PlannerConfig(budget_scale=0.01).resolved_budget(problem) == pytest.approx(2.0)


def test_kdtree_and_linear_give_identical_runs():
    problem = box_problem((0.1, 0.2), (0.9, 0.2), blocked=wall_with_gap)
    runs = [rrt_connect_plan(problem, PlannerConfig(seed=5, nn=kind, termination="samples",
                                                    max_samples=5000))
            for kind in ("linear", "kdtree")]
    assert runs[0].samples_total == runs[1].samples_total
    np.testing.assert_array_equal(np.array(runs[0].path), np.array(runs[1].path))

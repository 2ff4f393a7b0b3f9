"""Benchmark scenario files (JSON) and the worlds they describe."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from ..chain_env import (
    DEFAULT_CLEARANCE,
    DEFAULT_WORKSPACE,
    ChainRobot,
    ChainWorld,
    Environment,
    GenerationError,
    make_cluttered_random,
    make_horn,
    preset_config,
)
from ..planners import PLANNERS, PlannerConfig


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


SCENARIO_KEYS = {
    "id",
    "description",
    "environment",
    "n_links",
    "q_init",
    "q_goal",
    "planners",
    "config",
    "planner_config",
    "trials",
    "global_timeout",
    "seed",
    "clearance",
    "max_samples",
    "sample_budget",
}
REQUIRED_KEYS = {"id", "environment", "n_links", "q_init", "q_goal", "planners", "trials"}

# PlannerConfig fields a scenario may override; seeding and termination belong to the runner
CONFIG_KEYS = {f.name for f in dataclasses.fields(PlannerConfig)} - {
    "seed", "global_timeout", "termination", "max_samples",
}

ENV_KINDS = {"empty", "cluttered", "horn", "fixture"}

ConfigSpec = Union[str, list]


@dataclass(frozen=True)
class Scenario:
    """One planner-by-trial matrix over a single world and query."""

    id: str
    environment: dict
    n_links: int
    q_init: ConfigSpec
    q_goal: ConfigSpec
    planners: tuple[str, ...]
    trials: int
    global_timeout: float = 10.0
    seed: int = 0
    clearance: float = DEFAULT_CLEARANCE
    config: dict = field(default_factory=dict)
    planner_config: dict = field(default_factory=dict)
    max_samples: int = 20_000
    sample_budget: Optional[int] = None
    description: str = ""
    base_dir: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.id or not isinstance(self.id, str):
            raise ScenarioError("scenario id must be a non-empty string")
        if not isinstance(self.n_links, int) or self.n_links < 1:
            raise ScenarioError("n_links must be a positive integer")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ScenarioError("trials must be a positive integer")
        if not self.planners:
            raise ScenarioError("at least one planner is required")
        unknown = [p for p in self.planners if p not in PLANNERS]
        if unknown:
            raise ScenarioError(f"unknown planner(s) {unknown}; choose from {sorted(PLANNERS)}")
        if len(set(self.planners)) != len(self.planners):
            raise ScenarioError("planner list contains duplicates")
        if not self.global_timeout > 0:
            raise ScenarioError("global_timeout must be positive")
        if not self.clearance > 0:
            raise ScenarioError("clearance must be positive")
        bad = set(self.config) - CONFIG_KEYS
        if bad:
            raise ScenarioError(f"unknown config key(s) {sorted(bad)}")
        for name, overrides in self.planner_config.items():
            if name not in self.planners:
                raise ScenarioError(f"planner_config names {name!r}, which is not in planners")
            if not isinstance(overrides, dict):
                raise ScenarioError(f"planner_config[{name!r}] must be an object")
            bad = set(overrides) - CONFIG_KEYS
            if bad:
                raise ScenarioError(f"unknown config key(s) {sorted(bad)} for {name}")
        kind = self.environment.get("kind")
        if kind not in ENV_KINDS:
            raise ScenarioError(f"environment kind must be one of {sorted(ENV_KINDS)}, got {kind!r}")

    # -- derived objects -----------------------------------------------------

    def config_for(self, planner: Optional[str], seed: int,
                   deterministic: bool = False) -> PlannerConfig:
        """Planner settings for one trial: shared ``config``, then per-planner overrides."""
        overrides = {**self.config, **self.planner_config.get(planner, {})}
        kwargs = dict(seed=seed, global_timeout=self.global_timeout)
        if deterministic:
            # seconds-valued budgets make no sense when stages are counted in samples
            overrides.pop("subspace_budget", None)
            overrides.pop("budget_scale", None)
            if self.sample_budget is not None:
                overrides["subspace_budget"] = self.sample_budget
            kwargs.update(termination="samples", max_samples=self.max_samples)
        try:
            return PlannerConfig(**kwargs, **overrides)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"bad planner config: {exc}") from exc

    def build_environment(self) -> Environment:
        spec = dict(self.environment)
        kind = spec.pop("kind")
        try:
            if kind == "empty":
                return Environment.empty(tuple(spec.pop("workspace", DEFAULT_WORKSPACE)))
            if kind == "fixture":
                return Environment.load(self._resolve(spec.pop("path")))
            if kind == "cluttered":
                keep = spec.pop("keep_clear", None)
                return make_cluttered_random(
                    spec.pop("seed"),
                    spec.pop("n_obstacles"),
                    keep_clear=self._keep_clear(keep),
                    **_tuples(spec),
                )
            return make_horn(**_tuples(spec))
        except KeyError as exc:
            raise ScenarioError(f"environment spec is missing {exc}") from None
        except ScenarioError:
            raise
        except (TypeError, ValueError, OSError, GenerationError) as exc:
            raise ScenarioError(f"bad environment spec: {exc}") from None

    def _keep_clear(self, keep):
        if keep is None:
            return [(ChainRobot(self.n_links), self.resolve_config(q, None))
                    for q in (self.q_init, self.q_goal)]
        pairs = []
        for item in keep:
            n = int(item["n_links"])
            for name in item["presets"]:
                pairs.append((ChainRobot(n), preset_config(name, n)))
        return pairs

    def _resolve(self, path: str) -> Path:
        p = Path(path)
        if not p.is_absolute() and self.base_dir is not None:
            local = Path(self.base_dir) / p
            if local.exists():
                return local
        if p.exists():
            return p
        bundled = resources.files("rrtplus") / "data" / path
        if bundled.is_file():
            return Path(str(bundled))
        raise ScenarioError(f"environment fixture {path!r} not found")

    def resolve_config(self, spec: ConfigSpec, env: Optional[Environment]) -> np.ndarray:
        if isinstance(spec, str):
            try:
                return preset_config(spec, self.n_links, env)
            except ValueError as exc:
                raise ScenarioError(str(exc)) from None
        q = np.asarray(spec, dtype=float)
        if q.shape != (self.n_links,):
            raise ScenarioError(f"configuration has {q.size} values, expected {self.n_links}")
        return q

    def build(self) -> "ScenarioWorld":
        env = self.build_environment()
        robot = ChainRobot(self.n_links)
        world = ChainWorld(robot, env, clearance=self.clearance)
        q_init = self.resolve_config(self.q_init, env)
        q_goal = self.resolve_config(self.q_goal, env)
        for label, q in (("q_init", q_init), ("q_goal", q_goal)):
            if not world.state_valid(q):
                raise ScenarioError(f"{label} is in collision in scenario {self.id!r}")
        return ScenarioWorld(self, world, q_init, q_goal)


def _tuples(spec: dict) -> dict:
    return {k: tuple(v) if isinstance(v, list) else v for k, v in spec.items()}


@dataclass
class ScenarioWorld:
    scenario: Scenario
    world: ChainWorld
    q_init: np.ndarray
    q_goal: np.ndarray

    def problem(self, cfg: PlannerConfig):
        probe = self.world.problem(self.q_init, self.q_goal, 1.0)
        return self.world.problem(
            self.q_init, self.q_goal, cfg.resolved_resolution(probe), self.scenario.id
        )


def scenario_from_dict(data: dict[str, Any], base_dir: Optional[str] = None) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(data) - SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario key(s) {sorted(unknown)}")
    missing = REQUIRED_KEYS - set(data)
    if missing:
        raise ScenarioError(f"missing scenario key(s) {sorted(missing)}")
    kwargs = dict(data)
    kwargs["planners"] = tuple(kwargs["planners"])
    if not isinstance(kwargs["environment"], dict):
        raise ScenarioError("environment must be an object")
    for key in ("config", "planner_config"):
        if not isinstance(kwargs.get(key, {}), dict):
            raise ScenarioError(f"{key} must be an object")
    return Scenario(base_dir=base_dir, **kwargs)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read a scenario file; bare names fall back to the bundled scenarios."""
    p = Path(path)
    if not p.exists():
        bundled = resources.files("rrtplus") / "data" / "scenarios" / p.name
        if not bundled.is_file():
            bundled = resources.files("rrtplus") / "data" / "scenarios" / f"{p.name}.json"
        if not bundled.is_file():
            raise ScenarioError(f"scenario file {str(path)!r} not found")
        p = Path(str(bundled))
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p}: {exc}") from None
    return scenario_from_dict(data, base_dir=str(p.parent))


def bundled_scenarios() -> list[str]:
    root = resources.files("rrtplus") / "data" / "scenarios"
    return sorted(e.name[:-5] for e in root.iterdir() if e.name.endswith(".json"))

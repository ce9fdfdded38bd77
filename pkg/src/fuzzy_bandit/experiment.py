"""Benchmark orchestration: many independent bandit runs, aggregated curves.

Seeding layout (a stable contract -- see :mod:`fuzzy_bandit.seeding` for
the mixing function):

* task stream of run ``r``:                  ``derive_seed(seed, TASK_STREAM, r)``
* play stream of run ``r``, policy ``p``:    ``derive_seed(seed, PLAY_STREAM, r, p)``

Run indices and policy indices (config order) are 0-based.  The task
stream draws the arm means in one ``standard_normal(n)`` call; every
policy in a run faces the same task (common random numbers), while play
streams are policy-specific.  A play consumes one uniform draw (action
sampling) then one normal draw (reward).

Aggregation sums per-run results in ascending run order with plain
summation, so output is byte-identical regardless of the worker count
(workers only reorder the computation, never the merge).
"""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .bandit import BanditTask, generate_task
from .policies import PolicySpec, make_policy, sample_action
from .seeding import PLAY_STREAM, TASK_STREAM, derive_seed
from .value_estimation import SampleAverageEstimator

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "LearningCurve",
    "SummaryStats",
    "ExperimentResult",
    "SweepRow",
    "SweepResult",
    "run_single",
    "run_experiment",
    "summarize",
    "settling_play",
    "sweep",
    "resolve_workers",
]

THREADS_ENV_VAR = "FUZZY_BANDIT_THREADS"

_CONFIG_KEYS = ("arms", "runs", "plays", "seed", "policies")


def _require_int(d: dict, key: str, minimum: int | None = None) -> int:
    if key not in d:
        raise ValueError(f'missing required config key: "{key}"')
    v = d[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValueError(f'config key "{key}" must be an integer, got {v!r}')
    if minimum is not None and v < minimum:
        raise ValueError(f'config key "{key}" must be >= {minimum}, got {v}')
    return v


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one benchmark: testbed size, horizon, policies,
    and the base seed that determines every random draw."""

    n_arms: int
    runs: int
    plays: int
    policies: tuple[PolicySpec, ...]
    base_seed: int

    def __post_init__(self):
        object.__setattr__(self, "policies", tuple(self.policies))
        if self.n_arms < 2:
            raise ValueError(f"need at least 2 arms, got {self.n_arms}")
        if self.runs < 1:
            raise ValueError(f"need at least 1 run, got {self.runs}")
        if self.plays < 1:
            raise ValueError(f"need at least 1 play, got {self.plays}")
        if not self.policies:
            raise ValueError("need at least one policy")
        if not isinstance(self.base_seed, int) or isinstance(self.base_seed, bool):
            raise ValueError(f"seed must be an integer, got {self.base_seed!r}")
        labels = [p.label() for p in self.policies]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate policy specs: {labels}")

    def labels(self) -> tuple[str, ...]:
        return tuple(p.label() for p in self.policies)

    def to_dict(self) -> dict:
        return {
            "arms": self.n_arms,
            "runs": self.runs,
            "plays": self.plays,
            "seed": self.base_seed,
            "policies": [p.to_dict() for p in self.policies],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ValueError(f"config must be an object, got {type(d).__name__}")
        for key in d:
            if key not in _CONFIG_KEYS:
                raise ValueError(f'unknown config key: "{key}"')
        arms = _require_int(d, "arms", minimum=2)
        runs = _require_int(d, "runs", minimum=1)
        plays = _require_int(d, "plays", minimum=1)
        seed = _require_int(d, "seed")
        if "policies" not in d:
            raise ValueError('missing required config key: "policies"')
        raw = d["policies"]
        if not isinstance(raw, list) or not raw:
            raise ValueError('config key "policies" must be a non-empty list')
        policies = []
        for i, entry in enumerate(raw):
            try:
                policies.append(PolicySpec.from_dict(entry))
            except ValueError as exc:
                raise ValueError(f"policies[{i}]: {exc}") from None
        return cls(n_arms=arms, runs=runs, plays=plays,
                   policies=tuple(policies), base_seed=seed)


@dataclass(frozen=True, eq=False)
class RunRecord:
    """Per-play trace of one run: chosen action, reward, optimal flag."""

    actions: np.ndarray
    rewards: np.ndarray
    optimal: np.ndarray


@dataclass(frozen=True, eq=False)
class LearningCurve:
    """Per-play aggregates across runs: % optimal action and mean reward."""

    pct_optimal: np.ndarray
    avg_reward: np.ndarray


@dataclass(frozen=True)
class SummaryStats:
    """Digest of a %-optimal curve."""

    maximum: float
    mean: float
    median: float
    max_minus_median: float


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: ExperimentConfig
    labels: tuple[str, ...]
    curves: tuple[LearningCurve, ...]
    stats: tuple[SummaryStats, ...]


def run_single(task: BanditTask, policy: PolicySpec, plays: int, rng) -> RunRecord:
    """Play ``plays`` rounds of one task under one policy.

    Each round: form the distribution from the current estimates, sample
    an action (one uniform draw), observe a reward (one normal draw),
    update the estimator.
    """
    if plays < 1:
        raise ValueError(f"need at least 1 play, got {plays}")
    choose = make_policy(policy)
    est = SampleAverageEstimator(task.n)
    actions = np.empty(plays, dtype=np.int64)
    rewards = np.empty(plays, dtype=float)
    optimal = np.empty(plays, dtype=bool)
    best = task.optimal_action
    for t in range(plays):
        probs = choose(est.means)
        a = sample_action(probs, rng)
        r = task.pull(a, rng)
        est.update(a, r)
        actions[t] = a
        rewards[t] = r
        optimal[t] = a == best
    return RunRecord(actions=actions, rewards=rewards, optimal=optimal)


def _one_run(config: ExperimentConfig, r: int) -> list[RunRecord]:
    task_rng = np.random.default_rng(derive_seed(config.base_seed, TASK_STREAM, r))
    task = generate_task(config.n_arms, task_rng)
    records = []
    for p, spec in enumerate(config.policies):
        play_rng = np.random.default_rng(derive_seed(config.base_seed, PLAY_STREAM, r, p))
        records.append(run_single(task, spec, config.plays, play_rng))
    return records


def resolve_workers(workers: int | None = None, runs: int = 1) -> int:
    """Worker count: explicit argument wins, else the FUZZY_BANDIT_THREADS
    environment variable (0 = one per CPU), else 1.  Capped at ``runs``."""
    if workers is None:
        raw = os.environ.get(THREADS_ENV_VAR, "").strip()
        if raw:
            try:
                workers = int(raw)
            except ValueError:
                raise ValueError(
                    f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
                ) from None
        else:
            workers = 1
    if workers == 0:
        workers = os.cpu_count() or 1
    if workers < 0:
        raise ValueError(f"worker count must be >= 0, got {workers}")
    return max(1, min(int(workers), int(runs)))


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> ExperimentResult:
    """Execute every run for every policy and average the results.

    Output is a pure function of the config: runs may execute on a thread
    pool, but per-run results are merged in ascending run order.
    """
    n_workers = resolve_workers(workers, config.runs)
    k = len(config.policies)
    opt_sums = [np.zeros(config.plays) for _ in range(k)]
    rew_sums = [np.zeros(config.plays) for _ in range(k)]
    run_fn = partial(_one_run, config)

    def _accumulate(ordered_results):
        for records in ordered_results:
            for p, rec in enumerate(records):
                opt_sums[p] += rec.optimal
                rew_sums[p] += rec.rewards

    if n_workers == 1:
        _accumulate(map(run_fn, range(config.runs)))
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            _accumulate(pool.map(run_fn, range(config.runs)))

    curves = tuple(
        LearningCurve(pct_optimal=(o / config.runs) * 100.0, avg_reward=w / config.runs)
        for o, w in zip(opt_sums, rew_sums)
    )
    return ExperimentResult(
        config=config,
        labels=config.labels(),
        curves=curves,
        stats=tuple(summarize(c) for c in curves),
    )


def summarize(curve) -> SummaryStats:
    """Maximum, mean and median of a %-optimal curve (median of an
    even-length curve is the mean of the two central order statistics)."""
    pct = curve.pct_optimal if isinstance(curve, LearningCurve) else curve
    pct = np.asarray(pct, dtype=float)
    if pct.size == 0:
        raise ValueError("cannot summarize an empty curve")
    maximum = float(pct.max())
    median = float(np.median(pct))
    return SummaryStats(
        maximum=maximum,
        mean=float(pct.mean()),
        median=median,
        max_minus_median=maximum - median,
    )


def settling_play(pct_optimal, level: float = 0.9, tail: float = 0.1) -> int:
    """First play (1-based) at which the curve reaches ``level`` times its
    closing plateau, taken as the mean over the final ``tail`` fraction of
    plays.  A crude but scale-free convergence marker."""
    pct = np.asarray(pct_optimal, dtype=float)
    if pct.size == 0:
        raise ValueError("empty curve")
    k = max(1, math.ceil(tail * pct.size))
    threshold = level * pct[-k:].mean()
    return int(np.argmax(pct >= threshold)) + 1


@dataclass(frozen=True)
class SweepRow:
    kind: str
    value: float
    stats: SummaryStats


@dataclass(frozen=True, eq=False)
class SweepResult:
    rows: tuple[SweepRow, ...]
    best: dict  # policy kind -> parameter value with the highest mean


def _spec_for(kind: str, value: float) -> PolicySpec:
    if kind == "fuzzy":
        return PolicySpec(kind="fuzzy", xi=value)
    if kind == "softmax":
        return PolicySpec(kind="softmax", tau=value)
    if kind == "epsilon_greedy":
        return PolicySpec(kind="epsilon_greedy", epsilon=value)
    raise ValueError(f'policy kind "{kind}" has no sweep parameter')


def sweep(base_config: ExperimentConfig, grid, workers: int | None = None) -> SweepResult:
    """Re-run the benchmark over a parameter grid, one policy per point.

    ``grid`` is an iterable of ``(kind, values)`` pairs.  Every point
    reuses ``base_config.base_seed``, so all points face identical tasks
    and rows are directly comparable.  ``best`` holds the argmax-by-mean
    parameter per kind (first value on ties).
    """
    points = [(kind, float(v)) for kind, values in grid for v in values]
    if not points:
        raise ValueError("empty sweep grid")
    rows = []
    for kind, value in points:
        cfg = dataclasses.replace(base_config, policies=(_spec_for(kind, value),))
        result = run_experiment(cfg, workers=workers)
        rows.append(SweepRow(kind=kind, value=value, stats=result.stats[0]))
    best: dict = {}
    for row in rows:
        if row.kind not in best or row.stats.mean > best[row.kind][1]:
            best[row.kind] = (row.value, row.stats.mean)
    return SweepResult(rows=tuple(rows), best={k: v[0] for k, v in best.items()})

"""Fuzzy-inference action selection for value-based RL, with an n-armed
bandit testbed and a deterministic benchmark harness."""

__version__ = "0.1.0"

from .bandit import BanditTask, generate_task, task_csv
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    LearningCurve,
    RunRecord,
    SummaryStats,
    SweepResult,
    SweepRow,
    resolve_workers,
    run_experiment,
    run_single,
    settling_play,
    summarize,
    sweep,
)
from .fuzzy_engine import (
    FuzzyRuleBase,
    GaussianMF,
    MembershipCurves,
    build_rule_base,
    gaussian_membership,
    infer,
    membership_curves,
    output_center,
)
from .policies import (
    POLICY_KINDS,
    PolicySpec,
    epsilon_greedy_policy,
    fuzzy_policy,
    greedy_action,
    make_policy,
    normalize,
    policy_distribution,
    sample_action,
    softmax_policy,
    uniform_policy,
)
from .seeding import PLAY_STREAM, TASK_STREAM, derive_seed, splitmix64
from .value_estimation import SampleAverageEstimator

__all__ = [
    "__version__",
    "BanditTask",
    "generate_task",
    "task_csv",
    "ExperimentConfig",
    "ExperimentResult",
    "LearningCurve",
    "RunRecord",
    "SummaryStats",
    "SweepResult",
    "SweepRow",
    "resolve_workers",
    "run_experiment",
    "run_single",
    "settling_play",
    "summarize",
    "sweep",
    "FuzzyRuleBase",
    "GaussianMF",
    "MembershipCurves",
    "build_rule_base",
    "gaussian_membership",
    "infer",
    "membership_curves",
    "output_center",
    "POLICY_KINDS",
    "PolicySpec",
    "epsilon_greedy_policy",
    "fuzzy_policy",
    "greedy_action",
    "make_policy",
    "normalize",
    "policy_distribution",
    "sample_action",
    "softmax_policy",
    "uniform_policy",
    "PLAY_STREAM",
    "TASK_STREAM",
    "derive_seed",
    "splitmix64",
    "SampleAverageEstimator",
]

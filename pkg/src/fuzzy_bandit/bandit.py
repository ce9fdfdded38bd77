"""The n-armed bandit testbed: stationary Gaussian arms.

Arm means are drawn i.i.d. from N(0, 1) when a task is generated and
rewards from N(mean, 1) on each pull -- the classic testbed setup, which
puts roughly half the arms below zero and makes the best arm's lead worth
hunting for.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

__all__ = ["BanditTask", "generate_task", "task_csv"]


@dataclass(frozen=True, eq=False)
class BanditTask:
    """One immutable task instance: true per-arm means and the best arm."""

    true_values: np.ndarray
    optimal_action: int
    n: int

    def __post_init__(self):
        arr = np.asarray(self.true_values, dtype=float)
        if arr.ndim != 1 or arr.size != self.n or self.n < 1:
            raise ValueError(f"true_values must have shape ({self.n},)")
        if arr.flags.writeable:
            arr = arr.copy()
            arr.flags.writeable = False
        object.__setattr__(self, "true_values", arr)
        if self.optimal_action != int(np.argmax(arr)):
            raise ValueError(
                f"optimal_action {self.optimal_action} is not the argmax of true_values"
            )

    def pull(self, action: int, rng) -> float:
        """Sample a reward for ``action`` (0-based): N(true mean, 1)."""
        if not 0 <= action < self.n:
            raise IndexError(f"action {action} out of range 0..{self.n - 1}")
        return float(rng.normal(self.true_values[action], 1.0))

    def is_optimal(self, action: int) -> bool:
        if not 0 <= action < self.n:
            raise IndexError(f"action {action} out of range 0..{self.n - 1}")
        return action == self.optimal_action


def generate_task(n: int, rng) -> BanditTask:
    """Draw a fresh task: n arm means ~ N(0, 1), best arm = argmax
    (first index on the measure-zero chance of a tie)."""
    if n < 1:
        raise ValueError(f"need at least one arm, got {n}")
    values = rng.standard_normal(n)
    return BanditTask(true_values=values, optimal_action=int(np.argmax(values)), n=n)


def task_csv(task: BanditTask) -> str:
    """Debug dump of a task; arm indices are 1-based in the file."""
    buf = io.StringIO()
    buf.write("arm_index,true_value,is_optimal\n")
    for i in range(task.n):
        flag = "true" if i == task.optimal_action else "false"
        buf.write(f"{i + 1},{float(task.true_values[i])!r},{flag}\n")
    return buf.getvalue()

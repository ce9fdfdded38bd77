"""Incremental sample-average estimation of per-action values."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["SampleAverageEstimator"]


class SampleAverageEstimator:
    """Running mean of observed rewards per action.

    Actions that have never been pulled report a value of exactly 0.
    Means are updated incrementally (O(1) memory per action) and match
    the batch mean of the observed rewards to float accuracy.

    ``counts`` and ``means`` are the live arrays; treat them as
    read-only and mutate only through :meth:`update`.  One writer per
    instance.
    """

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"need at least one action, got {n}")
        self.n = n
        self.counts = np.zeros(n, dtype=np.int64)
        self.means = np.zeros(n, dtype=float)

    def update(self, action: int, reward: float) -> None:
        """Fold one reward into the mean for ``action`` (0-based)."""
        if not 0 <= action < self.n:
            raise IndexError(f"action {action} out of range 0..{self.n - 1}")
        if not math.isfinite(reward):
            raise ValueError(f"reward must be finite, got {reward}")
        c = int(self.counts[action]) + 1
        self.counts[action] = c
        self.means[action] += (reward - self.means[action]) / c

    def values(self) -> np.ndarray:
        """Snapshot copy of the current estimates."""
        return self.means.copy()

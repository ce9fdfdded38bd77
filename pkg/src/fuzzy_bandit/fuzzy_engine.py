"""Single-input Gaussian fuzzy system for grading action values.

A rule base of ``n`` rules covers a value interval [alpha, beta] with
uniformly spaced Gaussian input membership functions and maps each rule to
an output center on [0, 1].  Inference is center-average defuzzification:
the membership-weighted mean of the output centers, which is a smooth,
non-decreasing transformation of the input value.

The knob ``xi`` in [0, 1] only moves the output centers.  Near 0 the top
rule's center separates sharply from the rest (values near ``beta`` get
graded enormously higher than everything else); around 0.5 the ladder of
centers is widest and the grading is gentlest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "GaussianMF",
    "FuzzyRuleBase",
    "MembershipCurves",
    "gaussian_membership",
    "output_center",
    "build_rule_base",
    "infer",
    "membership_curves",
]

# Width of the Gaussian factor (in xi) that scales the non-top output
# centers.  Fixed by construction, not a tunable.
_LADDER_WIDTH = 0.15 * math.sqrt(2.0)


@dataclass(frozen=True)
class GaussianMF:
    """Gaussian membership function ``exp(-((x - center) / sigma)**2)``."""

    center: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


def gaussian_membership(x: float, mf: GaussianMF) -> float:
    """Degree of membership of ``x`` in ``mf``: 1.0 at the center, > 0 everywhere."""
    if not math.isfinite(x):
        raise ValueError(f"membership input must be finite, got {x}")
    u = (x - mf.center) / mf.sigma
    return math.exp(-u * u)


def _ladder_scale(xi: float) -> float:
    """Common factor applied to every output center below the top rule."""
    u = (xi - 0.5) / _LADDER_WIDTH
    return math.exp(-u * u)


def output_center(xi: float, j: int, n: int) -> float:
    """Center of rule ``j``'s output membership function, on [0, 1].

    Rules are indexed 1..n.  Rules below the top sit at
    ``(j - 1) / (2 (n - 1)) * s(xi)`` where ``s`` is a Gaussian ladder
    scale peaking at xi = 0.5; the top rule sits at
    ``max(1 - xi, s(xi) / 2)``, so small xi pushes it out to nearly 1
    while the rest collapse toward 0.
    """
    if n < 2:
        raise ValueError(f"rule count must be >= 2, got {n}")
    if not 1 <= j <= n:
        raise ValueError(f"rule index must be in 1..{n}, got {j}")
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must be in [0, 1], got {xi}")
    scale = _ladder_scale(xi)
    if j == n:
        return max(1.0 - xi, 0.5 * scale)
    return (j - 1) / (2.0 * (n - 1)) * scale


@lru_cache(maxsize=256)
def _output_centers(n: int, xi: float) -> np.ndarray:
    # xi and n fully determine the centers, so the vector is memoised;
    # the rest of the rule base depends on [alpha, beta] and is rebuilt
    # by every build_rule_base call.
    o = np.array([output_center(xi, j, n) for j in range(1, n + 1)])
    o.flags.writeable = False
    return o


@dataclass(frozen=True, eq=False)
class FuzzyRuleBase:
    """Immutable rule base: n input centers over [alpha, beta], n output
    centers on [0, 1], shared widths sigma_x / sigma_y.

    Arrays are frozen read-only so instances can be shared freely across
    workers.  ``sigma_y`` only shapes the output membership curves for
    export; center-average inference uses the centers alone.
    """

    n: int
    alpha: float
    beta: float
    input_centers: np.ndarray
    sigma_x: float
    output_centers: np.ndarray
    sigma_y: float
    xi: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"rule count must be >= 2, got {self.n}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise ValueError("bounds must be finite")
        if not self.alpha < self.beta:
            raise ValueError(f"need alpha < beta, got [{self.alpha}, {self.beta}]")
        if not (self.sigma_x > 0 and math.isfinite(self.sigma_x)):
            raise ValueError(f"sigma_x must be > 0, got {self.sigma_x}")
        if not (self.sigma_y > 0 and math.isfinite(self.sigma_y)):
            raise ValueError(f"sigma_y must be > 0, got {self.sigma_y}")
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError(f"xi must be in [0, 1], got {self.xi}")
        for name in ("input_centers", "output_centers"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.n,):
                raise ValueError(f"{name} must have shape ({self.n},), got {arr.shape}")
            if arr.flags.writeable:
                arr = arr.copy()
                arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def build_rule_base(n: int, alpha: float, beta: float, xi: float) -> FuzzyRuleBase:
    """Construct the standard rule base for values in [alpha, beta].

    Input centers are uniformly spaced with both endpoints included:
    ``c_j = (alpha (n - j) + beta (j - 1)) / (n - 1)``.  The widths are
    ``sigma_x = (beta - alpha) / (3 n - 1)`` and ``sigma_y = 1 / (2 n - 1)``:
    neighbouring rules overlap appreciably but the nearest rule always
    dominates.
    """
    if n < 2:
        raise ValueError(f"rule count must be >= 2, got {n}")
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ValueError("bounds must be finite")
    if not alpha < beta:
        raise ValueError(f"need alpha < beta, got [{alpha}, {beta}]")
    j = np.arange(1.0, n + 1.0)
    input_centers = (alpha * (n - j) + beta * (j - 1.0)) / (n - 1.0)
    # the formula is exact at the endpoints in real arithmetic; snap away
    # the one-ulp rounding so the interval ends are hit exactly
    input_centers[0] = alpha
    input_centers[-1] = beta
    return FuzzyRuleBase(
        n=n,
        alpha=float(alpha),
        beta=float(beta),
        input_centers=input_centers,
        sigma_x=(beta - alpha) / (3 * n - 1),
        output_centers=_output_centers(n, float(xi)),
        sigma_y=1.0 / (2 * n - 1),
        xi=float(xi),
    )


def infer(rb: FuzzyRuleBase, q):
    """Map value(s) ``q`` through the rule base.

    Returns ``sum_j o_j w_j / sum_j w_j`` with Gaussian weights
    ``w_j = exp(-((q - c_j) / sigma_x)**2)``.  The largest weight is
    factored out before exponentiation so the ratio stays well-scaled for
    any finite input, however far outside [alpha, beta].  The result is
    bounded by [min(o), max(o)] and is non-decreasing in ``q`` when the
    output centers are increasing.

    Accepts a scalar or an array; returns a float for scalar input.
    """
    scalar = np.ndim(q) == 0
    qa = np.asarray(q, dtype=float)
    if not np.all(np.isfinite(qa)):
        raise ValueError("inference input must be finite")
    z = (qa[..., np.newaxis] - rb.input_centers) / rb.sigma_x
    z *= z
    z -= z.min(axis=-1, keepdims=True)
    np.negative(z, out=z)
    w = np.exp(z, out=z)
    t = (w @ rb.output_centers) / w.sum(axis=-1)
    return float(t) if scalar else t


@dataclass(frozen=True, eq=False)
class MembershipCurves:
    """Sampled membership curves: input MFs over [alpha, beta], output MFs
    over [0, 1], one row per rule."""

    input_grid: np.ndarray        # (resolution,)
    input_values: np.ndarray      # (n, resolution)
    output_grid: np.ndarray       # (resolution,)
    output_values: np.ndarray     # (n, resolution)


def membership_curves(rb: FuzzyRuleBase, resolution: int) -> MembershipCurves:
    """Sample every membership function on uniform grids of ``resolution``
    points (endpoints included), for plotting or CSV export."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    x = np.linspace(rb.alpha, rb.beta, resolution)
    y = np.linspace(0.0, 1.0, resolution)
    inp = np.exp(-(((x - rb.input_centers[:, np.newaxis]) / rb.sigma_x) ** 2))
    out = np.exp(-(((y - rb.output_centers[:, np.newaxis]) / rb.sigma_y) ** 2))
    return MembershipCurves(x, inp, y, out)

"""Stochastic action-selection policies over estimated action values.

Every policy maps a vector of value estimates to a probability vector
satisfying three properties: probabilities are non-negative, a
better-valued action never gets a smaller probability than a worse one,
and the entries sum to one.

The fuzzy policy grades actions through a Gaussian rule base rebuilt at
every call, by default over the current value range (adaptive bounds):
``xi`` near 0 concentrates probability on the top action, mid-range
values spread it.  Boltzmann (softmax), epsilon-greedy, greedy and
uniform baselines share the same contract.  All randomness comes from an
explicit generator argument; nothing here owns hidden global state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fuzzy_engine import build_rule_base, infer

__all__ = [
    "POLICY_KINDS",
    "PolicySpec",
    "normalize",
    "fuzzy_policy",
    "softmax_policy",
    "epsilon_greedy_policy",
    "uniform_policy",
    "greedy_action",
    "sample_action",
    "make_policy",
    "policy_distribution",
]

POLICY_KINDS = ("fuzzy", "softmax", "epsilon_greedy", "greedy", "uniform")
_BOUNDS_MODES = ("adaptive", "fixed")

# which optional parameters each kind accepts
_ALLOWED_PARAMS = {
    "fuzzy": ("xi", "alpha", "beta"),
    "softmax": ("tau",),
    "epsilon_greedy": ("epsilon",),
    "greedy": (),
    "uniform": (),
}


@dataclass(frozen=True)
class PolicySpec:
    """Declarative policy description; serializes to the run-config schema.

    ``bounds`` applies to the fuzzy kind only: "adaptive" rebuilds the
    rule base over [min Q, max Q] each step, "fixed" uses the given
    ``alpha``/``beta``.
    """

    kind: str
    xi: float | None = None
    tau: float | None = None
    epsilon: float | None = None
    bounds: str = "adaptive"
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise ValueError(f'unknown policy kind: "{self.kind}"')
        for name in ("xi", "tau", "epsilon", "alpha", "beta"):
            value = getattr(self, name)
            if value is None:
                continue
            if name not in _ALLOWED_PARAMS[self.kind]:
                raise ValueError(
                    f'"{name}" is not a parameter of policy kind "{self.kind}"'
                )
            try:
                object.__setattr__(self, name, float(value))
            except (TypeError, ValueError):
                raise ValueError(f'"{name}" must be a number, got {value!r}') from None
        if self.kind != "fuzzy" and self.bounds != "adaptive":
            raise ValueError('"bounds" is only a parameter of the fuzzy kind')
        if self.kind == "fuzzy":
            if self.xi is None or not 0.0 <= self.xi <= 1.0:
                raise ValueError(f'"xi" must be in [0, 1], got {self.xi}')
            if self.bounds not in _BOUNDS_MODES:
                raise ValueError(
                    f'"bounds" must be one of {_BOUNDS_MODES}, got {self.bounds!r}'
                )
            if self.bounds == "fixed":
                if self.alpha is None or self.beta is None:
                    raise ValueError('fixed bounds require both "alpha" and "beta"')
                if not self.alpha < self.beta:
                    raise ValueError(
                        f'"alpha" must be < "beta", got [{self.alpha}, {self.beta}]'
                    )
            elif self.alpha is not None or self.beta is not None:
                raise ValueError('"alpha"/"beta" are only valid with "bounds": "fixed"')
        elif self.kind == "softmax":
            if self.tau is None or not self.tau > 0:
                raise ValueError(f'"tau" must be > 0, got {self.tau}')
        elif self.kind == "epsilon_greedy":
            if self.epsilon is None or not 0.0 <= self.epsilon <= 1.0:
                raise ValueError(f'"epsilon" must be in [0, 1], got {self.epsilon}')

    def label(self) -> str:
        """Short unique-per-parameters name used in result files."""
        if self.kind == "fuzzy":
            if self.bounds == "fixed":
                return f"fuzzy(xi={self.xi!r},alpha={self.alpha!r},beta={self.beta!r})"
            return f"fuzzy(xi={self.xi!r})"
        if self.kind == "softmax":
            return f"softmax(tau={self.tau!r})"
        if self.kind == "epsilon_greedy":
            return f"epsilon_greedy(epsilon={self.epsilon!r})"
        return self.kind

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "fuzzy":
            d["xi"] = self.xi
            d["bounds"] = self.bounds
            if self.bounds == "fixed":
                d["alpha"] = self.alpha
                d["beta"] = self.beta
        elif self.kind == "softmax":
            d["tau"] = self.tau
        elif self.kind == "epsilon_greedy":
            d["epsilon"] = self.epsilon
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PolicySpec":
        if not isinstance(d, dict):
            raise ValueError(f"policy entry must be an object, got {type(d).__name__}")
        if "kind" not in d:
            raise ValueError('missing policy key: "kind"')
        known = {"kind", "xi", "tau", "epsilon", "bounds", "alpha", "beta"}
        for key in d:
            if key not in known:
                raise ValueError(f'unknown policy key: "{key}"')
        return cls(**d)


def _values(q, min_n: int = 1) -> np.ndarray:
    v = np.asarray(q, dtype=float)
    if v.ndim != 1 or v.size < min_n:
        raise ValueError(f"need a 1-d value vector with at least {min_n} entries")
    if not np.all(np.isfinite(v)):
        raise ValueError("action values must be finite")
    return v


def normalize(t_values) -> np.ndarray:
    """Scale non-negative grades into a probability vector.

    Rejects negative entries and all-zero input: both mean the upstream
    transformation is broken, not that the caller wants a uniform fallback.
    """
    t = np.asarray(t_values, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("need a non-empty 1-d vector of grades")
    if not np.all(np.isfinite(t)):
        raise ValueError("grades must be finite")
    if np.any(t < 0):
        raise ValueError("grades must be non-negative")
    total = t.sum()
    if not total > 0:
        raise ValueError("grades sum to zero; cannot form a distribution")
    return t / total


def uniform_policy(n: int) -> np.ndarray:
    """Equal probability for each of ``n`` actions."""
    if n < 1:
        raise ValueError(f"need at least one action, got {n}")
    return np.full(n, 1.0 / n)


def fuzzy_policy(q, xi: float, bounds: str = "adaptive",
                 alpha: float | None = None, beta: float | None = None) -> np.ndarray:
    """Grade actions through the fuzzy rule base, then normalize.

    With adaptive bounds, the rule base covers [min Q, max Q] of the
    current estimates, which makes the policy invariant to positive
    affine rescaling of Q.  When every estimate is equal the range is
    degenerate and the policy is uniform by definition.
    """
    v = _values(q, min_n=2)
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"xi must be in [0, 1], got {xi}")
    if bounds == "adaptive":
        lo = v.min()
        hi = v.max()
        if lo == hi:
            return np.full(v.size, 1.0 / v.size)
    elif bounds == "fixed":
        if alpha is None or beta is None:
            raise ValueError("fixed bounds require alpha and beta")
        lo, hi = alpha, beta
    else:
        raise ValueError(f'bounds must be "adaptive" or "fixed", got {bounds!r}')
    rb = build_rule_base(v.size, lo, hi, xi)
    return normalize(infer(rb, v))


def softmax_policy(q, tau: float) -> np.ndarray:
    """Boltzmann grading: probability proportional to ``exp(q / tau)``.

    The exponent is positive so larger values always get larger
    probability; tau -> 0 approaches greedy, tau -> inf approaches
    uniform.  The max is subtracted before exponentiation, which leaves
    the result unchanged and avoids overflow.
    """
    v = _values(q)
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    e = np.exp((v - v.max()) / tau)
    return e / e.sum()


def epsilon_greedy_policy(q, epsilon: float) -> np.ndarray:
    """Explore uniformly with probability epsilon, otherwise pick a
    maximizer; ties share the greedy mass equally."""
    v = _values(q)
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    best = v == v.max()
    probs = np.full(v.size, epsilon / v.size)
    probs[best] += (1.0 - epsilon) / best.sum()
    return probs


def greedy_action(q, rng) -> int:
    """Index of a maximal estimate, ties broken uniformly with ``rng``.

    Random tie-breaking matters: at the start of a run all estimates are
    equal, and a fixed-first-index rule would bias early play.
    """
    v = _values(q)
    best = np.flatnonzero(v == v.max())
    if best.size == 1:
        return int(best[0])
    return int(best[rng.integers(best.size)])


def sample_action(dist, rng) -> int:
    """Draw an action index from a probability vector via inverse CDF.

    Uses a single uniform draw against the running cumulative sums in
    index order; the final cumulative value is treated as exactly 1, so
    any rounding shortfall is absorbed by the last action.
    """
    cum = np.cumsum(dist)
    u = rng.random()
    idx = int(np.searchsorted(cum, u, side="right"))
    return min(idx, cum.size - 1)


def make_policy(spec: PolicySpec):
    """Compile a spec into a ``q -> probability vector`` callable."""
    if spec.kind == "fuzzy":
        xi = spec.xi
        if spec.bounds == "fixed":
            lo, hi = spec.alpha, spec.beta
            return lambda q: fuzzy_policy(q, xi, "fixed", lo, hi)
        return lambda q: fuzzy_policy(q, xi)
    if spec.kind == "softmax":
        tau = spec.tau
        return lambda q: softmax_policy(q, tau)
    if spec.kind == "epsilon_greedy":
        eps = spec.epsilon
        return lambda q: epsilon_greedy_policy(q, eps)
    if spec.kind == "greedy":
        # as a distribution, greedy = uniform over the argmax set
        return lambda q: epsilon_greedy_policy(q, 0.0)
    return lambda q: uniform_policy(np.asarray(q).size)


def policy_distribution(spec: PolicySpec, q) -> np.ndarray:
    """One-shot form of :func:`make_policy`."""
    return make_policy(spec)(q)

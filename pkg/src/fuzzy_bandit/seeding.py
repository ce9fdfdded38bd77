"""Deterministic 64-bit seed derivation for independent RNG streams.

The experiment runner gives every (run, purpose[, policy]) combination its
own generator so results are reproducible and independent of scheduling.
Seeds are derived with splitmix64, which is trivial to re-implement, so
the streams can be replayed outside this package:

    state = splitmix64(base_seed)
    for each field f:  state = splitmix64(state XOR f)

with all arithmetic modulo 2**64.  The derived value seeds numpy's PCG64
bit generator via ``numpy.random.default_rng``.
"""

from __future__ import annotations

__all__ = ["splitmix64", "derive_seed", "TASK_STREAM", "PLAY_STREAM"]

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# stream-purpose tags ("task" / "play" in ASCII)
TASK_STREAM = 0x7461736B
PLAY_STREAM = 0x706C6179


def splitmix64(x: int) -> int:
    """One output of the splitmix64 generator for state ``x`` (mod 2**64)."""
    z = (x + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(base_seed: int, *fields: int) -> int:
    """Mix ``base_seed`` with integer fields into one 64-bit seed.

    Field order matters; distinct (purpose tag, indices...) tuples give
    unrelated streams for all practical purposes.
    """
    state = splitmix64(base_seed & _MASK64)
    for f in fields:
        state = splitmix64(state ^ (f & _MASK64))
    return state

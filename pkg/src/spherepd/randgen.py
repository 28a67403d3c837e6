"""Seed derivation for reproducible randomness.

Every random draw in the library flows from a single 64-bit master seed.
Child seeds are derived with a splitmix64 stream so that the mapping
(master seed, task tag) -> child seed is stable across platforms and
languages.  The child seed then feeds ``numpy.random.default_rng``.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def splitmix64(state: int) -> tuple[int, int]:
    """One step of the splitmix64 stream: returns (next_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def derive_seed(master: int, *tags: int) -> int:
    """Derive a child seed from a master seed and integer tags.

    Feeding the tags through the stream one by one keeps distinct tag
    tuples on distinct streams with overwhelming probability.
    """
    state = master & _MASK
    state, out = splitmix64(state)
    for tag in tags:
        state = (state ^ (tag & _MASK)) & _MASK
        state, out = splitmix64(state)
    return out


def rng_for(master: int, *tags: int) -> np.random.Generator:
    """A numpy Generator seeded from the derived child seed."""
    return np.random.default_rng(derive_seed(master, *tags))

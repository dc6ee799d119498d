"""Deterministic per-trial random streams.

Every stream is a Philox (counter-based) generator keyed by a 64-bit master
seed plus an integer tuple, so trials can run in any order or process and
still draw identical numbers.
"""
from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1


def stream(master_seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(master_seed, *key)``."""
    ss = np.random.SeedSequence(int(master_seed) & MASK64, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def as_generator(rng) -> np.random.Generator:
    """Accept a Generator, an int seed, or None."""
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(0 if rng is None else rng)

"""Deterministic random-stream derivation.

All stochastic code paths derive their generators from a single base seed
through ``numpy.random.SeedSequence`` spawn keys, so any artifact can be
reproduced from the seed alone and per-item streams are independent of how
many items precede them.
"""

from __future__ import annotations

import numpy as np

__all__ = ["derive_rng", "derive_seed"]


def derive_rng(seed: int, *key: int) -> np.random.Generator:
    """PCG64 generator for the stream identified by (seed, key)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=key))


def derive_seed(seed: int, *key: int) -> int:
    """A 64-bit integer seed for the stream identified by (seed, key).

    Used where an API takes a plain integer seed rather than a generator.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=key)
    return int(ss.generate_state(1, np.uint64)[0])

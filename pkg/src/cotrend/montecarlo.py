"""Seeded random streams for the Monte Carlo size/power suites.

Every replicate gets its own child stream derived from a base seed, so
results do not depend on evaluation order. The base seed can be moved with
the COTREND_SEED environment variable; the replication pipeline itself never
draws random numbers and ignores it.
"""

from __future__ import annotations

import os

import numpy as np


def base_seed(default: int = 20240901) -> int:
    raw = os.environ.get("COTREND_SEED")
    if raw is None:
        return default
    return int(raw)


def rng_stream(seed: int, rep: int) -> np.random.Generator:
    """Independent generator for replicate ``rep`` of a suite seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(rep,)))

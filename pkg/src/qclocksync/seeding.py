"""Deterministic derivation of independent random sources."""

from __future__ import annotations

import numpy as np


def derive_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Return a generator that depends only on ``master_seed`` and ``keys``.

    Distinct key tuples give statistically independent streams, so trials (or
    individual rounds) can run in any order or in parallel.
    """
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(seq))

"""Deterministic random streams for replicated experiments.

Every replicate gets its own counter-based generator keyed by
``master_seed XOR replicate_index``, so results do not depend on how
replicates are scheduled across worker threads.  Within a replicate,
independent channels (panel sampling, network sampling, CV shuffling, ...)
get disjoint Philox keys.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Channel ids for the sub-streams used inside one replicate.
CH_COVARIANCE = 1
CH_PANEL = 2
CH_NETWORKS = 3
CH_CV_BASE = 1000  # per-node CV shuffles use CH_CV_BASE + node index


def derive_seed(master_seed: int, index: int) -> int:
    """Seed for replicate `index` of a run keyed by `master_seed`."""
    return (int(master_seed) ^ int(index)) & _MASK64


def stream(seed: int, channel: int = 0) -> np.random.Generator:
    """Independent generator for (seed, channel).

    Philox is counter-based: distinct 128-bit keys give statistically
    independent streams, so channels never collide regardless of how much
    each one draws.
    """
    key = ((int(channel) & _MASK64) << 64) | (int(seed) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))

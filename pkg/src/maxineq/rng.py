"""Counter-based random source.

All stochastic outputs in the package are driven by Philox generators keyed
by explicit 64-bit seeds, so every experiment is reproducible bit for bit.
Independent replicas of the same experiment use ``stream`` offsets, which
map to disjoint Philox counter blocks.
"""

from __future__ import annotations

import numpy as np

GENERATOR_NAME = "philox4x64"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator keyed by ``seed``; ``stream`` selects a disjoint substream."""
    if not (0 <= int(seed) < 2**64):
        raise ValueError(f"seed must fit in 64 bits, got {seed}")
    bitgen = np.random.Philox(key=int(seed))
    if stream:
        bitgen = bitgen.jumped(int(stream))
    return np.random.Generator(bitgen)

"""Deterministic RNG substreams derived from a single master seed.

Every random choice in the package flows from one integer seed through
named substreams, so a run is reproducible from a single knob and
parallel workers can derive independent streams without coordination.
"""
from __future__ import annotations

import numpy as np


def substream(seed: int, *tags: int | str) -> np.random.Generator:
    """Return a Generator for the substream named by ``tags``.

    Tags are folded into the SeedSequence entropy, so ``substream(7, "tree", 3)``
    is stable across processes and platforms (no use of Python's salted hash).
    """
    entropy: list[int] = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for tag in tags:
        if isinstance(tag, str):
            entropy.extend(tag.encode("utf-8"))
        else:
            entropy.append(int(tag) & 0xFFFFFFFFFFFFFFFF)
    return np.random.default_rng(np.random.SeedSequence(entropy))

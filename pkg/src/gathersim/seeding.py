"""Deterministic seed derivation for reproducible experiments.

All randomness in the simulator flows from 64-bit integer seeds. Sub-seeds
(per trial, per round) are the outputs of a SplitMix64 stream, a published,
portable mixing function, so every run can be reproduced bit-exactly from
its master seed on any platform. Draws themselves use numpy's PCG64.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def splitmix64(state: int) -> int:
    """SplitMix64 output function applied to ``state``."""
    z = state & _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Return the ``index``-th output of the SplitMix64 stream seeded with ``seed``.

    Closed form: splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15 mod 2^64).
    Trial seeds are derived from the master seed with index = trial number,
    and per-round seeds from the trial seed with index = round number, so
    trials stay independent and reproducible in any execution order.
    """
    if index < 0:
        raise ValueError("index must be >= 0")
    return splitmix64((seed + (index + 1) * _GOLDEN) & _MASK64)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & _MASK64))

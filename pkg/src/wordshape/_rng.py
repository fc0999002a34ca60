"""Deterministic seed derivation.

Every stochastic routine in this package takes a single integer root seed.
Independent substreams (one per repetition, per sampler, ...) are derived
from it with splitmix64, so results never depend on how work is split
across processes. Derivation is pure arithmetic on python ints; numpy
Generators are only constructed at the leaves.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(state: int) -> int:
    """One output of the splitmix64 sequence whose counter sits at ``state``."""
    z = (state + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_seed(root: int, index: int) -> int:
    """64-bit seed for substream ``index`` of ``root``.

    Two rounds of mixing keep nearby (root, index) pairs statistically
    unrelated. Used both for numpy Generators and as the start state of
    the in-kernel counter streams.
    """
    s = splitmix64((root & _MASK) ^ 0x243F6A8885A308D3)
    return splitmix64(s ^ ((index & _MASK) * 0xD1B54A32D192ED03 & _MASK))


def stream_seeds(root: int, count: int, offset: int = 0) -> np.ndarray:
    """Vector of ``count`` substream seeds (uint64), indices offset..offset+count-1."""
    idx = np.arange(offset, offset + count, dtype=np.uint64)
    s = np.uint64(splitmix64((root & _MASK) ^ 0x243F6A8885A308D3))
    z = s ^ (idx * np.uint64(0xD1B54A32D192ED03))
    z = z + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def generator(root: int, index: int = 0) -> np.random.Generator:
    """numpy Generator on substream ``index`` of ``root``."""
    return np.random.Generator(np.random.PCG64(stream_seed(root, index)))

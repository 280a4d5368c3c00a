"""Counter-based random streams.

Every draw is a pure function of (seed, counter), so draw i of a run does
not depend on batch boundaries: generating counters [0, m) in one call or
in several chunks (or in parallel) yields bit-identical output.
"""

from __future__ import annotations

import hashlib

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = 0xFFFFFFFFFFFFFFFF


def _finalize(z: np.ndarray) -> np.ndarray:
    # uint64 wraparound is intended; silence numpy's scalar overflow warning
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, *parts: int | str) -> int:
    """Domain-separated child seed, stable across runs and platforms."""
    state = np.uint64(seed & _MASK)
    for part in parts:
        if isinstance(part, str):
            digest = hashlib.blake2b(part.encode(), digest_size=8).digest()
            part = int.from_bytes(digest, "little")
        with np.errstate(over="ignore"):
            state = _finalize((state ^ np.uint64(part & _MASK)) + _GOLDEN)
    return int(state)


def counter_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform float64 values in [0, 1) for counters start..start+count-1."""
    idx = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = np.uint64(seed & _MASK) + (idx + np.uint64(1)) * _GOLDEN
    return (_finalize(state) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def counter_choice(seed: int, start: int, count: int, cum_weights: np.ndarray) -> np.ndarray:
    """Categorical indices drawn by inverting the cumulative weight vector."""
    u = counter_uniforms(seed, start, count)
    idx = np.searchsorted(cum_weights, u, side="right")
    return np.minimum(idx, len(cum_weights) - 1)

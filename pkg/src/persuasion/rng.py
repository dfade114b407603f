"""Counter-based deterministic uniforms for parallel Monte Carlo.

Draws are a pure function of (seed, replication, period, stream) through a
splitmix64-style avalanche chain, so any partition of replications across
workers reproduces the same numbers bit for bit. The scalar and vectorized
paths implement identical integer arithmetic.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


def _finalize(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return (z ^ (z >> 31)) & _MASK


def uniform(seed: int, replication: int, period: int, stream: int) -> float:
    """One uniform in [0, 1) addressed by its counter coordinates."""
    h = _finalize(seed)
    h = _finalize((h + _GAMMA * (replication + 1)) & _MASK)
    h = _finalize((h + _GAMMA * (period + 1)) & _MASK)
    h = _finalize((h + _GAMMA * (stream + 1)) & _MASK)
    return (h >> 11) * _INV_2_53


def _finalize_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def uniform_vec(seed: int, replications: np.ndarray, period: int, stream: int) -> np.ndarray:
    """Vectorized uniform() over an array of replication indices."""
    h0 = _finalize(seed)
    z = np.uint64(h0) + np.uint64(_GAMMA) * (replications.astype(np.uint64) + np.uint64(1))
    z = _finalize_vec(z)
    z = _finalize_vec(z + np.uint64((_GAMMA * (period + 1)) & _MASK))
    z = _finalize_vec(z + np.uint64((_GAMMA * (stream + 1)) & _MASK))
    return (z >> np.uint64(11)).astype(np.float64) * _INV_2_53

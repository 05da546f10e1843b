"""Deterministic counter-based randomness.

Every random quantity in a simulation is derived from a 64-bit seed plus a
few integer/string tags, so trials are reproducible and independent
sub-streams can be handed to concurrent workers.
"""
from __future__ import annotations

import numpy as np

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)

_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)

_INV53 = float(2.0**-53)


def _mix(z):
    """splitmix64 finalizer; works on uint64 scalars and arrays."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)


def _as_u64(value) -> np.uint64:
    if isinstance(value, str):
        h = np.uint64(1469598103934665603)  # FNV-1a offset basis
        with np.errstate(over="ignore"):
            for b in value.encode():
                h = (h ^ np.uint64(b)) * np.uint64(1099511628211)
        return h
    return np.uint64(int(value) & 0xFFFFFFFFFFFFFFFF)


def mix64(*tags) -> int:
    """Collapse (seed, tag, tag, ...) into a single 64-bit value."""
    h = _GOLDEN
    with np.errstate(over="ignore"):
        for t in tags:
            h = _mix((h + _GOLDEN) ^ _as_u64(t))
    return int(h)


def substream(*tags) -> np.random.Generator:
    """Counter-based generator keyed by the given tags."""
    return np.random.Generator(np.random.Philox(key=mix64(*tags)))


def pair_uniforms(seed, i, j):
    """Uniform(0,1) keyed by (seed, min(i,j), max(i,j)); vectorized.

    This is the per-pair coin of the naive edge sampler: the same
    (seed, i, j) always yields the same uniform, which gives exact
    monotone couplings across connection strengths.
    """
    i = np.asarray(i, dtype=np.uint64)
    j = np.asarray(j, dtype=np.uint64)
    lo = np.minimum(i, j)
    hi = np.maximum(i, j)
    with np.errstate(over="ignore"):
        h = _mix((_as_u64(seed) + _GOLDEN) ^ (lo * _M1))
        h = _mix(h ^ (hi * _M2))
    return (h >> _S11).astype(np.float64) * _INV53

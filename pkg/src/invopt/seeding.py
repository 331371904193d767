"""Deterministic random-stream derivation.

Every stochastic component in invopt draws from a stream derived from a
64-bit base seed plus a tuple of context keys (product id, replication
index, ...).  String keys are folded through SHA-256 so the derivation is
stable across processes and platforms, which is what makes replications
safe to fan out over any number of workers.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive_rng", "derive_seed_sequence"]

_MASK64 = (1 << 64) - 1


def _key_to_int(key: int | str) -> int:
    if isinstance(key, str):
        return int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "big")
    return int(key) & _MASK64


def derive_seed_sequence(seed: int, *keys: int | str) -> np.random.SeedSequence:
    entropy = [int(seed) & _MASK64] + [_key_to_int(k) for k in keys]
    return np.random.SeedSequence(entropy)


def derive_rng(seed: int, *keys: int | str) -> np.random.Generator:
    """A PCG64 generator private to (seed, *keys), independent of call order."""
    return np.random.default_rng(derive_seed_sequence(seed, *keys))

"""Counter-based random streams for reproducible, order-independent simulation.

Every random draw in this package is a pure function of
(master seed, experiment label, pattern/trial index, draw index), so results
never depend on batch size, worker count, or scheduling, and a consumer may
lazily evaluate only the draws it needs.

Generator family (fixed for this release): SplitMix64. A 64-bit word is
produced as ``mix64(key + GOLDEN * (index + 1))`` where ``mix64`` is the
SplitMix64 finalizer and GOLDEN is 2^64/phi. Keys for sub-streams are derived
with the same function, which is the standard splittable-generator
construction (as in java.util.SplittableRandom). Uniform doubles take the top
53 bits of the word.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_INV_2_53 = 2.0 ** -53


def mix64(x: int) -> int:
    """SplitMix64 finalizer on a 64-bit word (Python-int arithmetic)."""
    x &= MASK64
    x ^= x >> 30
    x = (x * _MIX1) & MASK64
    x ^= x >> 27
    x = (x * _MIX2) & MASK64
    x ^= x >> 31
    return x


def mix64_array(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer applied elementwise to a uint64 array."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(_MIX1)
    x ^= x >> np.uint64(27)
    x *= np.uint64(_MIX2)
    x ^= x >> np.uint64(31)
    return x


def fnv1a64(text: str) -> int:
    """FNV-1a hash of a label string, used to key experiment streams."""
    h = _FNV_OFFSET
    for b in text.encode("utf-8"):
        h ^= b
        h = (h * _FNV_PRIME) & MASK64
    return h


def experiment_key(master_seed: int, label: str) -> int:
    """Root key of an experiment's stream family."""
    return mix64(mix64(master_seed & MASK64) ^ fnv1a64(label))


def derive(key: int, index: int) -> int:
    """Sub-key (or raw 64-bit draw) number `index` of the stream `key`."""
    return mix64((key + GOLDEN * (index + 1)) & MASK64)


def uniform(key: int, index: int) -> float:
    """Uniform double in [0, 1): draw `index` of stream `key`."""
    return (derive(key, index) >> 11) * _INV_2_53


def derive_array(key: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized `derive` over a uint64 index array."""
    idx = indices.astype(np.uint64, copy=False)
    x = np.uint64(key & MASK64) + np.uint64(GOLDEN) * (idx + np.uint64(1))
    return mix64_array(x)


def uniform_array(key: int, indices: np.ndarray) -> np.ndarray:
    """Vectorized `uniform` over a uint64 index array."""
    return (derive_array(key, indices) >> np.uint64(11)) * _INV_2_53


class Stream:
    """A sequence of per-pattern sub-streams rooted at one key.

    ``take()`` hands out sub-keys for consecutive pattern indices; each
    pattern's draws are then indexed independently, so consuming patterns one
    at a time or in batches yields identical values.
    """

    def __init__(self, key: int):
        self.key = key & MASK64
        self._next = 0

    @classmethod
    def for_experiment(cls, master_seed: int, label: str) -> "Stream":
        return cls(experiment_key(master_seed, label))

    def subkey(self, index: int) -> int:
        return derive(self.key, index)

    def take(self) -> int:
        key = self.subkey(self._next)
        self._next += 1
        return key

"""Noise models: i.i.d. BSC / BEC and uniform fixed-weight patterns.

Draw indexing convention (part of the reproducibility contract): for BSC/BEC
the draw index of a position equals the position, so sampling only the
positions a decoder will read yields exactly the restriction of the full
pattern. Fixed-weight sampling consumes draws 0..w-1 as steps of a partial
Fisher-Yates shuffle, giving exact uniformity over w-subsets in O(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng

ERASED = -1  # sentinel in received-word symbol view


@dataclass(frozen=True)
class ChannelSpec:
    kind: str  # bsc | bec | fixed_error | fixed_erasure
    p: float = 0.0
    w: int = 0

    def __post_init__(self):
        if self.kind == "bsc":
            if not 0.0 <= self.p < 0.5:
                raise ValueError(f"BSC flip probability must be in [0, 0.5), got {self.p}")
        elif self.kind == "bec":
            if not 0.0 <= self.p < 1.0:
                raise ValueError(f"BEC erasure probability must be in [0, 1), got {self.p}")
        elif self.kind in ("fixed_error", "fixed_erasure"):
            if self.w < 0:
                raise ValueError(f"pattern weight must be >= 0, got {self.w}")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")

    @classmethod
    def bsc(cls, p_f: float) -> "ChannelSpec":
        return cls(kind="bsc", p=p_f)

    @classmethod
    def bec(cls, p_e: float) -> "ChannelSpec":
        return cls(kind="bec", p=p_e)

    @classmethod
    def fixed_error(cls, w: int) -> "ChannelSpec":
        return cls(kind="fixed_error", w=w)

    @classmethod
    def fixed_erasure(cls, w: int) -> "ChannelSpec":
        return cls(kind="fixed_erasure", w=w)

    @property
    def is_erasure(self) -> bool:
        return self.kind in ("bec", "fixed_erasure")

    def label(self) -> str:
        if self.kind in ("bsc", "bec"):
            return f"{self.kind}|p={self.p!r}"
        return f"{self.kind}|w={self.w}"


@dataclass(frozen=True)
class NoisePattern:
    n: int
    flips: frozenset = field(default_factory=frozenset)
    erasures: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.flips & self.erasures:
            raise ValueError("a position cannot be both flipped and erased")
        for pos in self.flips | self.erasures:
            if not 0 <= pos < self.n:
                raise ValueError(f"position {pos} outside [0, {self.n})")

    @property
    def weight(self) -> int:
        return len(self.flips) + len(self.erasures)


class ReceivedWord:
    """Ternary received sequence: bit values plus an erasure mask."""

    def __init__(self, bits, erased=None):
        self.bits = np.asarray(bits, dtype=np.uint8)
        if erased is None:
            erased = np.zeros(self.bits.shape, dtype=bool)
        self.erased = np.asarray(erased, dtype=bool)
        if self.bits.shape != self.erased.shape:
            raise ValueError("bits and erasure mask lengths differ")

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def symbols(self) -> np.ndarray:
        """int8 view with ERASED (-1) at erased positions."""
        out = self.bits.astype(np.int8)
        out[self.erased] = ERASED
        return out


def _fixed_weight_subset(key: int, n: int, w: int) -> np.ndarray:
    idx = np.arange(n, dtype=np.int64)
    for step in range(w):
        j = step + int(rng.uniform(key, step) * (n - step))
        idx[step], idx[j] = idx[j], idx[step]
    return idx[:w]


def sample_masks(spec: ChannelSpec, n: int, key: int) -> tuple[np.ndarray, np.ndarray]:
    """(flip mask, erasure mask) for one pattern, from sub-stream `key`."""
    flips = np.zeros(n, dtype=bool)
    erasures = np.zeros(n, dtype=bool)
    if spec.kind == "bsc":
        if spec.p > 0.0:
            flips = rng.uniform_array(key, np.arange(n, dtype=np.uint64)) < spec.p
    elif spec.kind == "bec":
        if spec.p > 0.0:
            erasures = rng.uniform_array(key, np.arange(n, dtype=np.uint64)) < spec.p
    else:
        if spec.w > n:
            raise ValueError(f"pattern weight {spec.w} exceeds length {n}")
        chosen = _fixed_weight_subset(key, n, spec.w)
        if spec.kind == "fixed_error":
            flips[chosen] = True
        else:
            erasures[chosen] = True
    return flips, erasures


def sample(spec: ChannelSpec, n: int, stream: rng.Stream) -> NoisePattern:
    """Next noise pattern from the stream; deterministic in (spec, n, key, index)."""
    flips, erasures = sample_masks(spec, n, stream.take())
    return NoisePattern(
        n=n,
        flips=frozenset(np.nonzero(flips)[0].tolist()),
        erasures=frozenset(np.nonzero(erasures)[0].tolist()),
    )


def apply(codeword, pattern: NoisePattern) -> ReceivedWord:
    """Transmit: flip the flip positions, erase the erasure positions."""
    bits = np.array(codeword, dtype=np.uint8)
    if len(bits) != pattern.n:
        raise ValueError(f"codeword length {len(bits)} != pattern length {pattern.n}")
    erased = np.zeros(pattern.n, dtype=bool)
    if pattern.flips:
        fl = np.fromiter(pattern.flips, dtype=np.int64)
        bits[fl] ^= 1
    if pattern.erasures:
        er = np.fromiter(pattern.erasures, dtype=np.int64)
        erased[er] = True
        bits[er] = 0  # value at erased positions is undefined; mask rules
    return ReceivedWord(bits, erased)

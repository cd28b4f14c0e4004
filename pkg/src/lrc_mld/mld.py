"""One-step majority-logic decoding from disjoint recovery sets.

Each recovery set votes the XOR of its r received bits; a set containing an
erasure votes "erased". In error mode a symbol decodes to 1 when at least
half of the t votes are 1 (a tie decodes to 1), so for a transmitted 0 a tie
is a decoding failure -- the convention the analytic bounds use. In erasure
mode any clean set recovers the symbol exactly; the symbol fails only when
all t sets are hit. The symbol's own received value is never used as a vote,
and symbols are decoded independently in a single pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ERASED, ReceivedWord
from .code_model import RecoveryStructure

FAILED = -1  # sentinel in decoded output


@dataclass(frozen=True)
class DecodeOutcome:
    mode: str  # errors | erasures
    decoded: np.ndarray      # int8, {0, 1, FAILED}
    votes_zero: np.ndarray   # int32 per symbol
    votes_one: np.ndarray
    votes_erased: np.ndarray
    tie: np.ndarray          # bool per symbol (error mode only)
    all_sets_erased: np.ndarray  # bool per symbol (erasure mode only)


def vote(received: ReceivedWord, recovery_set) -> int:
    """One set's estimate: ERASED if the set is hit, else XOR of its bits."""
    idx = np.asarray(recovery_set, dtype=np.int64)
    if received.erased[idx].any():
        return ERASED
    return int(received.bits[idx].sum() & 1)


def decode_symbol_errors(received: ReceivedWord, rs: RecoveryStructure, i: int) -> tuple[int, bool]:
    """(decoded bit, tie flag) for symbol i; received must be erasure-free."""
    if received.erased.any():
        raise ValueError("error-mode decoding requires an erasure-free word")
    votes = received.bits[rs.sets[i]].sum(axis=1) & 1
    ones = int(votes.sum())
    zeros = rs.t - ones
    return (1 if 2 * ones >= rs.t else 0), ones == zeros


def decode_symbol_erasures(received: ReceivedWord, rs: RecoveryStructure, i: int) -> int:
    """Decoded bit for symbol i, or FAILED when every set has an erasure."""
    for s in rs.sets[i]:
        v = vote(received, s)
        if v != ERASED:
            return v
    return FAILED


def decode_word(received: ReceivedWord, rs: RecoveryStructure, mode: str) -> DecodeOutcome:
    """Decode every symbol independently; see the module notes for the rules."""
    if mode == "errors":
        if received.erased.any():
            raise ValueError("error-mode decoding requires an erasure-free word")
        parities = received.bits[rs.sets].sum(axis=2) & 1  # (n, t)
        ones = parities.sum(axis=1).astype(np.int32)
        zeros = (rs.t - ones).astype(np.int32)
        decoded = (2 * ones >= rs.t).astype(np.int8)
        return DecodeOutcome(
            mode=mode,
            decoded=decoded,
            votes_zero=zeros,
            votes_one=ones,
            votes_erased=np.zeros(rs.n, dtype=np.int32),
            tie=ones == zeros,
            all_sets_erased=np.zeros(rs.n, dtype=bool),
        )
    if mode == "erasures":
        hit = received.erased[rs.sets].any(axis=2)  # (n, t)
        parities = (received.bits * ~received.erased)[rs.sets].sum(axis=2) & 1
        clean = ~hit
        erased_votes = hit.sum(axis=1).astype(np.int32)
        ones = (parities * clean).sum(axis=1).astype(np.int32)
        zeros = (clean.sum(axis=1) - ones).astype(np.int32)
        all_hit = erased_votes == rs.t
        first_clean = np.argmax(clean, axis=1)
        decoded = parities[np.arange(rs.n), first_clean].astype(np.int8)
        decoded[all_hit] = FAILED
        return DecodeOutcome(
            mode=mode,
            decoded=decoded,
            votes_zero=zeros,
            votes_one=ones,
            votes_erased=erased_votes,
            tie=np.zeros(rs.n, dtype=bool),
            all_sets_erased=all_hit,
        )
    raise ValueError(f"mode must be 'errors' or 'erasures', got {mode!r}")


def block_decodes(outcome: DecodeOutcome, codeword) -> bool:
    """True iff every symbol decoded to the transmitted value."""
    cw = np.asarray(codeword, dtype=np.int8)
    return bool(np.array_equal(outcome.decoded, cw))

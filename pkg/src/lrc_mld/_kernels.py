"""Numba kernels for the trial loops.

Each kernel replays the package RNG contract inline: trial i of an experiment
stream draws uniforms u(trial_key, j) with trial_key = mix64(exp_key +
GOLDEN*(i+1)) and draw j = mix64(trial_key + GOLDEN*(j+1)) >> 11 scaled to
[0, 1). Draw indices for bit-level channels are the symbol positions, so
these kernels produce exactly the patterns channel.sample_masks would. All
counters are integers, so partial sums combine associatively and worker
count cannot change results.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)
_INV_2_53 = 2.0 ** -53


@njit(cache=True, nogil=True, inline="always")
def _mix64(x):
    x = x ^ (x >> np.uint64(30))
    x = x * _MIX1
    x = x ^ (x >> np.uint64(27))
    x = x * _MIX2
    x = x ^ (x >> np.uint64(31))
    return x


@njit(cache=True, nogil=True, inline="always")
def _u(key, index):
    word = _mix64(key + _GOLDEN * (np.uint64(index) + _ONE))
    return np.float64(word >> np.uint64(11)) * _INV_2_53


@njit(cache=True, nogil=True)
def parity_votes_bsc(exp_key, trial_lo, trial_hi, t, wrong_prob):
    """Failures among trials [lo, hi): wrong votes ~ Binomial(t, W), fail if 2*wrong >= t."""
    key = np.uint64(exp_key)
    failures = 0
    for trial in range(trial_lo, trial_hi):
        tkey = _mix64(key + _GOLDEN * (np.uint64(trial) + _ONE))
        wrong = 0
        for j in range(t):
            if _u(tkey, j) < wrong_prob:
                wrong += 1
        if 2 * wrong >= t:
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def bit_votes_bsc(exp_key, trial_lo, trial_hi, positions, p_f):
    """Bit-level BSC failures for one symbol whose sets are `positions` (t, r)."""
    key = np.uint64(exp_key)
    t, r = positions.shape
    failures = 0
    for trial in range(trial_lo, trial_hi):
        tkey = _mix64(key + _GOLDEN * (np.uint64(trial) + _ONE))
        wrong = 0
        for s in range(t):
            parity = 0
            for l in range(r):
                if _u(tkey, positions[s, l]) < p_f:
                    parity ^= 1
            wrong += parity
        if 2 * wrong >= t:
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def bit_votes_bec(exp_key, trial_lo, trial_hi, positions, p_e):
    """Bit-level BEC failures: fail when every set contains an erasure."""
    key = np.uint64(exp_key)
    t, r = positions.shape
    failures = 0
    for trial in range(trial_lo, trial_hi):
        tkey = _mix64(key + _GOLDEN * (np.uint64(trial) + _ONE))
        all_hit = True
        for s in range(t):
            hit = False
            for l in range(r):
                if _u(tkey, positions[s, l]) < p_e:
                    hit = True
                    break
            if not hit:
                all_hit = False
                break
        if all_hit:
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def block_failures_iid(exp_key, trial_lo, trial_hi, sets, p, erasure_mode):
    """Block failures over i.i.d. BSC/BEC for a full structure (all-zero word)."""
    key = np.uint64(exp_key)
    n, t, r = sets.shape
    failures = 0
    noisy = np.zeros(n, dtype=np.uint8)
    for trial in range(trial_lo, trial_hi):
        tkey = _mix64(key + _GOLDEN * (np.uint64(trial) + _ONE))
        for q in range(n):
            noisy[q] = 1 if _u(tkey, q) < p else 0
        if _block_fails(noisy, sets, erasure_mode):
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def block_failures_fixed_weight(exp_key, trial_lo, trial_hi, sets, w, erasure_mode):
    """Block failures for uniform weight-w patterns (partial Fisher-Yates)."""
    key = np.uint64(exp_key)
    n, t, r = sets.shape
    failures = 0
    noisy = np.zeros(n, dtype=np.uint8)
    idx = np.empty(n, dtype=np.int64)
    for trial in range(trial_lo, trial_hi):
        tkey = _mix64(key + _GOLDEN * (np.uint64(trial) + _ONE))
        for q in range(n):
            idx[q] = q
            noisy[q] = 0
        for step in range(w):
            j = step + int(_u(tkey, step) * (n - step))
            tmp = idx[step]
            idx[step] = idx[j]
            idx[j] = tmp
            noisy[idx[step]] = 1
        if _block_fails(noisy, sets, erasure_mode):
            failures += 1
    return failures


@njit(cache=True, nogil=True)
def block_failures_patterns(patterns, n, sets, erasure_mode):
    """Block failures over explicit weight-w patterns, one per row of `patterns`."""
    count = 0
    noisy = np.zeros(n, dtype=np.uint8)
    n_patterns, w = patterns.shape
    for b in range(n_patterns):
        for k in range(w):
            noisy[patterns[b, k]] = 1
        if _block_fails(noisy, sets, erasure_mode):
            count += 1
        for k in range(w):
            noisy[patterns[b, k]] = 0
    return count


@njit(cache=True, nogil=True, inline="always")
def _block_fails(noisy, sets, erasure_mode):
    n, t, r = sets.shape
    for i in range(n):
        if erasure_mode:
            all_hit = True
            for s in range(t):
                hit = False
                for l in range(r):
                    if noisy[sets[i, s, l]] == 1:
                        hit = True
                        break
                if not hit:
                    all_hit = False
                    break
            if all_hit:
                return True
        else:
            wrong = 0
            for s in range(t):
                parity = 0
                for l in range(r):
                    parity ^= noisy[sets[i, s, l]]
                wrong += parity
            if 2 * wrong >= t:
                return True
    return False

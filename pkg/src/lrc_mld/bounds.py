"""Closed-form failure probabilities and bounds for majority-logic decoding.

A symbol with locality r and availability t is decoded by majority vote over
t independent recovery-set estimates. Over a BSC each vote is wrong with
probability W = (1 - (1-2*p_f)^r)/2; decoding fails when wrong votes reach at
least half of t (a tie counts as failure throughout, matching the sum-of-signs
event S_t <= 0 that the exponential bound controls). Over a BEC a vote is lost
when any of its r symbols is erased, and decoding fails only when all t votes
are lost.

Everything is computed and stored in base-2 log domain so that the large-n
block-failure curves (t up to (log2 n)^alpha with log2 n up to 30) never
underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

_LN2 = math.log(2.0)


class ParameterError(ValueError):
    """Raised when an operation is called outside its parameter domain."""


@dataclass(frozen=True)
class VoteProbs:
    """Per-recovery-set vote probabilities over a BSC."""

    correct: float
    wrong: float
    bias: float  # 1 - 2*p_f

    @property
    def C(self) -> float:
        return self.correct

    @property
    def W(self) -> float:
        return self.wrong


@dataclass(frozen=True)
class BoundValue:
    """A probability (or union bound, possibly > 1) with authoritative log2.

    `value` is 2**log2_value rounded to float64; it underflows to 0.0 below
    about 1e-323 while `log2_value` stays finite.
    """

    value: float
    log2_value: float

    @classmethod
    def from_log2(cls, log2_value: float) -> "BoundValue":
        if log2_value == -math.inf:
            return cls(0.0, -math.inf)
        return cls(2.0 ** log2_value, log2_value)

    @classmethod
    def zero(cls) -> "BoundValue":
        return cls(0.0, -math.inf)


def _check_pf(p_f: float) -> None:
    if not 0.0 <= p_f < 0.5:
        raise ParameterError(f"bit-flip probability must be in [0, 0.5), got {p_f}")


def _check_pe(p_e: float) -> None:
    if not 0.0 <= p_e < 1.0:
        raise ParameterError(f"erasure probability must be in [0, 1), got {p_e}")


def _check_rt(r: int, t) -> None:
    if r < 1:
        raise ParameterError(f"locality r must be >= 1, got {r}")
    if t < 1:
        raise ParameterError(f"availability t must be >= 1, got {t}")


def vote_probs(p_f: float, r: int) -> VoteProbs:
    """Correct/wrong vote probabilities: C = (1 + (1-2p_f)^r)/2, W = 1 - C."""
    _check_pf(p_f)
    if r < 1:
        raise ParameterError(f"locality r must be >= 1, got {r}")
    y = 1.0 - 2.0 * p_f
    yr = y ** r
    return VoteProbs(correct=(1.0 + yr) / 2.0, wrong=(1.0 - yr) / 2.0, bias=y)


def chernoff_bit_bound_bsc(p_f: float, r: int, t) -> BoundValue:
    """Exponential-moment bound (1 - (1-2p_f)^(2r))^(t/2) on bit failure.

    `t` may be real-valued: the block-failure curves evaluate the bound at
    t = (log2 n)^alpha without rounding.
    """
    _check_pf(p_f)
    _check_rt(r, t)
    y = 1.0 - 2.0 * p_f
    if y == 1.0:
        return BoundValue.zero()
    # log2(1 - y^(2r)) via expm1 to keep precision when y^(2r) is near 1 or 0
    base_log2 = math.log(-math.expm1(2 * r * math.log(y))) / _LN2
    return BoundValue.from_log2((t / 2.0) * base_log2)


def exact_bit_failure_bsc(p_f: float, r: int, t: int) -> BoundValue:
    """Exact bit-failure probability Pr[Binomial(t, W) >= t/2], ties included.

    The binomial upper tail is summed in log domain from the smallest terms
    (exact fsum of scaled terms) using log-gamma binomial coefficients.
    """
    _check_pf(p_f)
    _check_rt(r, t)
    if t != int(t):
        raise ParameterError(f"exact tail needs integer t, got {t}")
    t = int(t)
    vp = vote_probs(p_f, r)
    if vp.wrong == 0.0:
        return BoundValue.zero()
    j_min = (t + 1) // 2 if t % 2 else t // 2
    j = np.arange(j_min, t + 1, dtype=np.float64)
    log_terms = (
        gammaln(t + 1.0)
        - gammaln(j + 1.0)
        - gammaln(t - j + 1.0)
        + j * math.log(vp.wrong)
        + (t - j) * math.log(vp.correct)
    )
    m = float(np.max(log_terms))
    scaled = np.exp(np.sort(log_terms - m))
    ln_value = m + math.log(math.fsum(scaled.tolist()))
    return BoundValue.from_log2(min(ln_value, 0.0) / _LN2)


def exact_bit_failure_bec(p_e: float, r: int, t: int) -> BoundValue:
    """Exact BEC bit-failure probability (1 - (1-p_e)^r)^t."""
    _check_pe(p_e)
    _check_rt(r, t)
    if p_e == 0.0:
        return BoundValue.zero()
    # 1 - (1-p_e)^r computed as -expm1(r*log1p(-p_e))
    base_log2 = math.log(-math.expm1(r * math.log1p(-p_e))) / _LN2
    return BoundValue.from_log2(t * base_log2)


def union_bler_bound(n: int, bit_bound: BoundValue) -> BoundValue:
    """Union bound n * P_bit on block failure; may exceed 1 by design."""
    if n < 1:
        raise ParameterError(f"length n must be >= 1, got {n}")
    return BoundValue.from_log2(math.log2(n) + bit_bound.log2_value)


def bsc_weight_threshold(n: int, r: int, t, c: float) -> float:
    """Error-pattern weight below which virtually all patterns are corrected.

    Computes n * (1 - (c*log2(n)/t)^(1/(2r))). Note the leading factor n: the
    general statement carries n/2, but the worked numerical value this
    library pins (w ~ 186 at n=1024, r=4, t=100, c=2) uses n, and that value
    is the contract here.
    """
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    _check_rt(r, t)
    x = c * math.log2(n) / t
    if x > 1.0:
        raise ParameterError(
            f"threshold undefined: c*log2(n) = {c * math.log2(n):g} exceeds t = {t:g}"
        )
    return n * (1.0 - x ** (1.0 / (2.0 * r)))


def bec_weight_threshold(n: int, r: int, t, c: float) -> float:
    """Erasure-pattern weight threshold n * (1 - (c*log2(n)/t)^(1/r))."""
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")
    _check_rt(r, t)
    x = c * math.log2(n) / t
    if x > 1.0:
        raise ParameterError(
            f"threshold undefined: c*log2(n) = {c * math.log2(n):g} exceeds t = {t:g}"
        )
    return n * (1.0 - x ** (1.0 / r))


def kl_rate(a: float) -> float:
    """Per-vote exponential decay rate of Pr(S_t <= 0), in nats.

    Equals D_KL(Bernoulli(1/2) || Bernoulli(a)) = -ln(2*sqrt(a*(1-a))),
    evaluated as -0.5*log1p(-(2a-1)^2) for accuracy near a = 1/2.
    """
    if not 0.5 < a < 1.0:
        raise ParameterError(f"rate defined for a in (0.5, 1), got {a}")
    b = 2.0 * a - 1.0
    return -0.5 * math.log1p(-b * b)


def availability_worst_case(t: int) -> tuple[int, int]:
    """Adversarial guarantees: (t-1 erasures, floor((t-1)/2) errors)."""
    if t < 1:
        raise ParameterError(f"availability t must be >= 1, got {t}")
    return t - 1, (t - 1) // 2

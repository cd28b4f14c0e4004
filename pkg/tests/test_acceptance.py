"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import itertools
import math
import time
from math import comb

import numpy as np

from lrc_mld import bounds
from lrc_mld.channel import ChannelSpec, NoisePattern, apply
from lrc_mld.code_model import build_simplex_structure
from lrc_mld.mld import decode_word
from lrc_mld.montecarlo import (
    AbstractSource,
    ExperimentConfig,
    SimplexSource,
    estimate_ber,
    estimate_ber_parity_shortcut,
    exhaustive_oracle,
    figure1_experiment,
    figure2_computation,
    rows_to_csv,
    weight_sweep,
    BER_HEADER,
)

THREADS = 2


def _report(num: int, name: str, elapsed: float, limit: float) -> None:
    print(f"\ncriterion {num:2d} PASS  ({elapsed:6.2f}s < {limit:.0f}s)  {name}", flush=True)
    assert elapsed < limit, f"criterion {num} exceeded its runtime budget"


def test_criterion_01_vote_prob_equivalence():
    start = time.perf_counter()
    draws = np.random.default_rng(1)
    for _ in range(1000):
        p = float(draws.uniform(0.0, 0.5))
        r = int(draws.integers(1, 13))
        vp = bounds.vote_probs(p, r)
        correct = sum(comb(r, s) * p**s * (1 - p) ** (r - s) for s in range(0, r + 1, 2))
        wrong = sum(comb(r, s) * p**s * (1 - p) ** (r - s) for s in range(1, r + 1, 2))
        assert abs(vp.correct - correct) <= 1e-12 * correct
        assert abs(vp.wrong - wrong) <= 1e-12 * max(wrong, 1e-300)
    _report(1, "vote probabilities match the binomial parity-sum oracle", time.perf_counter() - start, 1.0)


def _brute_fail_prob(p: float, r: int, t: int, erasure: bool) -> float:
    """Exhaustive 2^(r*t) enumeration, probabilities grouped by pattern weight."""
    m = r * t
    x = np.arange(1 << m, dtype=np.uint64)
    full = np.uint64((1 << r) - 1)
    if erasure:
        fails = np.ones(x.shape, dtype=bool)
        for j in range(t):
            fails &= ((x >> np.uint64(j * r)) & full) != 0
    else:
        wrong = np.zeros(x.shape, dtype=np.int64)
        for j in range(t):
            chunk = (x >> np.uint64(j * r)) & full
            wrong += (np.bitwise_count(chunk) & np.uint64(1)).astype(np.int64)
        fails = 2 * wrong >= t
    counts = np.bincount(np.bitwise_count(x[fails]).astype(np.int64), minlength=m + 1)
    w = np.arange(m + 1, dtype=np.float64)
    return float(np.sum(counts * p**w * (1.0 - p) ** (m - w)))


def test_criterion_02_exact_tails_vs_exhaustive_enumeration():
    start = time.perf_counter()
    pairs = [(r, t) for r in range(1, 21) for t in range(1, 20 // r + 1)]
    assert len(pairs) == 66
    for r, t in pairs:
        for p in (0.1, 0.2, 0.3, 0.45):
            lib = bounds.exact_bit_failure_bsc(p, r, t).value
            brute = _brute_fail_prob(p, r, t, erasure=False)
            assert abs(lib - brute) <= 1e-12 * max(brute, 1e-300), (r, t, p)
        for p in (0.1, 0.2, 0.3, 0.9):
            lib = bounds.exact_bit_failure_bec(p, r, t).value
            brute = _brute_fail_prob(p, r, t, erasure=True)
            assert abs(lib - brute) <= 1e-12 * max(brute, 1e-300), (r, t, p)
    _report(2, "exact BSC/BEC tails equal exhaustive enumeration (r*t <= 20)", time.perf_counter() - start, 60.0)


def test_criterion_03_chernoff_dominance_and_kl_gap():
    start = time.perf_counter()
    for p in np.arange(0.05, 0.4501, 0.05):
        p = float(p)
        for r in range(1, 9):
            exacts = np.array(
                [bounds.exact_bit_failure_bsc(p, r, t).log2_value for t in range(1, 201)]
            )
            bound_base = bounds.chernoff_bit_bound_bsc(p, r, 2).log2_value  # per-unit-t slope
            chernoffs = np.array([(t / 2.0) * bound_base for t in range(1, 201)])
            assert (exacts <= chernoffs + 1e-12).all(), (p, r)
    # the log-gap grows sublinearly in t (normalized gap strictly shrinking)
    for p, r in ((0.2, 4), (0.1, 2), (0.3, 6)):
        gaps = {}
        for t in (50, 100, 200):
            gap = (
                bounds.chernoff_bit_bound_bsc(p, r, t).log2_value
                - bounds.exact_bit_failure_bsc(p, r, t).log2_value
            )
            assert math.isfinite(gap) and gap >= 0
            gaps[t] = gap / t
        assert gaps[50] > gaps[100] > gaps[200]
    _report(3, "exact <= exponential bound on the whole grid; gap sublinear", time.perf_counter() - start, 60.0)


def test_criterion_04_bec_monte_carlo_matches_closed_form():
    start = time.perf_counter()
    exact = bounds.exact_bit_failure_bec(0.3, 4, 20).value
    hits = 0
    for seed in range(10):
        cfg = ExperimentConfig(
            source=AbstractSource(r=4, t=20), channel=ChannelSpec.bec(0.3),
            trials=10**6, master_seed=seed,
        )
        res = estimate_ber(cfg, threads=THREADS)
        hits += res.ci_low <= exact <= res.ci_high
    assert hits >= 9, f"exact inside the 99.7% interval in only {hits}/10 runs"
    _report(4, f"BEC closed form inside Wilson interval in {hits}/10 runs", time.perf_counter() - start, 60.0)


def test_criterion_05_bsc_estimators_match_exact_tail():
    start = time.perf_counter()
    exact = bounds.exact_bit_failure_bsc(0.2, 4, 100).value
    hits_bits, hits_parity = 0, 0
    for seed in range(10):
        cfg = ExperimentConfig(
            source=AbstractSource(r=4, t=100), channel=ChannelSpec.bsc(0.2),
            trials=10**6, master_seed=seed,
        )
        res = estimate_ber(cfg, threads=THREADS)
        hits_bits += res.ci_low <= exact <= res.ci_high
        res = estimate_ber_parity_shortcut(4, 100, 0.2, 10**6, master_seed=seed, threads=THREADS)
        hits_parity += res.ci_low <= exact <= res.ci_high
    assert hits_bits >= 9, f"bit-level: {hits_bits}/10"
    assert hits_parity >= 9, f"parity shortcut: {hits_parity}/10"
    _report(
        5,
        f"BSC exact tail inside Wilson interval: bit-level {hits_bits}/10, parity {hits_parity}/10",
        time.perf_counter() - start, 120.0,
    )


def test_criterion_06_figure1_regimes_at_desk_scale():
    start = time.perf_counter()
    rows = figure1_experiment(nexp_min=6, nexp_max=14, trials=10**5, threads=THREADS)
    by_regime: dict[str, dict[int, dict]] = {}
    for row in rows:
        by_regime.setdefault(row["experiment"], {})[row["n"]] = row
    # (a) every empirical BER below the bound plus three half-widths
    for row in rows:
        margin = 3.0 * (row["ci_high"] - row["ci_low"]) / 2.0
        assert row["p_hat"] <= 2.0 ** row["bound_chernoff_log2"] + margin, row
    # (b) linear availability: vanishing failure, always under the floor regime
    linear = by_regime["t=n/4"]
    floor = by_regime["t=sqrt(log2 n)"]
    assert linear[2**14]["p_hat"] < 1e-3
    for n in linear:
        assert linear[n]["p_hat"] < floor[n]["p_hat"], n
    # (c) sub-logarithmic availability saturates at a high error floor
    for n, row in floor.items():
        assert 0.15 <= row["p_hat"] <= 0.45, (n, row["p_hat"])
    _report(6, "figure-1 regimes: bounded, vanishing, and saturating as expected", time.perf_counter() - start, 300.0)


def test_criterion_07_figure2_curves_and_log_domain_agreement():
    start = time.perf_counter()
    rows = figure2_computation()
    p_f, r = 0.13, 4
    base = math.log2(1.0 - (1.0 - 2.0 * p_f) ** (2 * r))
    by_alpha: dict[float, list[dict]] = {}
    for row in rows:
        direct = row["log2_n"] + (row["t_real"] / 2.0) * base  # closed form, one line
        assert abs(direct - row["union_chernoff_log2"]) <= 1e-9
        by_alpha.setdefault(row["alpha"], []).append(row)
    crossing = {
        alpha: next((r_["log2_n"] for r_ in rs if r_["union_chernoff_log2"] < 0.0), None)
        for alpha, rs in by_alpha.items()
    }
    assert crossing[2.05] in (13, 14)
    assert crossing[1.9] in (19, 20, 21)
    at23 = next(r_ for r_ in by_alpha[1.8] if r_["log2_n"] == 23)
    assert at23["union_chernoff_log2"] > 0.0
    curve = [r_["union_chernoff_log2"] for r_ in by_alpha[1.8]]
    peak = curve.index(max(curve))
    assert 0 < peak < len(curve) - 1
    _report(7, "figure-2 crossings at log2 n = %s; interior max for alpha=1.8" % crossing, time.perf_counter() - start, 1.0)


def test_criterion_08_worst_case_guarantees_simplex_m3():
    start = time.perf_counter()
    rs = build_simplex_structure(3)
    zero = [0] * 7
    checked = 0
    for w in (1, 2):
        for pat in itertools.combinations(range(7), w):
            word = apply(zero, NoisePattern(n=7, erasures=frozenset(pat)))
            assert decode_word(word, rs, "erasures").decoded.tolist() == zero, pat
            checked += 1
    assert checked == 28
    for q in range(7):
        word = apply(zero, NoisePattern(n=7, flips=frozenset({q})))
        assert decode_word(word, rs, "errors").decoded.tolist() == zero
    word = apply(zero, NoisePattern(n=7, flips=frozenset({1, 3})))
    assert decode_word(word, rs, "errors").decoded.tolist() != zero
    _report(8, "28 erasure and 7 error patterns decode; flips {1,3} defeat the vote", time.perf_counter() - start, 1.0)


def test_criterion_09_weight_sweep_matches_exhaustive_oracle():
    start = time.perf_counter()
    rs = build_simplex_structure(4)
    rows = weight_sweep(SimplexSource(4), "erasure", range(1, 7), 10**4, master_seed=0, threads=THREADS)
    for row in rows:
        count, total = exhaustive_oracle(rs, "erasure", row["w"])
        assert row["ci_low"] <= count / total <= row["ci_high"], row
    _report(9, "m=4 erasure sweep agrees with the exhaustive oracle at w=1..6", time.perf_counter() - start, 60.0)


def test_criterion_10_threshold_and_worst_case_values():
    start = time.perf_counter()
    assert abs(bounds.bsc_weight_threshold(1024, 4, 100, 2) - 186) <= 1.0
    assert bounds.availability_worst_case(100) == (99, 49)
    _report(10, "weight threshold 186 +/- 1; worst case (99, 49)", time.perf_counter() - start, 1.0)


def test_criterion_11_figure1_worker_count_determinism():
    start = time.perf_counter()
    csv_1 = rows_to_csv(figure1_experiment(trials=10**5, threads=1), BER_HEADER)
    csv_8 = rows_to_csv(figure1_experiment(trials=10**5, threads=8), BER_HEADER)
    assert csv_1 == csv_8
    _report(11, "figure-1 CSV byte-identical with 1 and 8 workers", time.perf_counter() - start, 600.0)

import itertools

import numpy as np
import pytest

from lrc_mld import mld
from lrc_mld.channel import ERASED, NoisePattern, ReceivedWord, apply
from lrc_mld.code_model import build_simplex_structure, encode_simplex
from lrc_mld.mld import FAILED, block_decodes, decode_symbol_erasures, decode_symbol_errors, decode_word, vote


def received(bits, erased=None):
    return ReceivedWord(np.array(bits, dtype=np.uint8), erased)


def test_vote_two_flips_cancel():
    # both members of a set flipped: the estimate stays correct
    assert vote(received([0, 1, 1, 0, 0, 0, 0]), [1, 2]) == 0


def test_vote_single_flip_corrupts():
    assert vote(received([0, 1, 0, 0, 0, 0, 0]), [1, 2]) == 1


def test_vote_erasure_propagates():
    word = received([0] * 7, np.array([False, True] + [False] * 5))
    assert vote(word, [1, 2]) == ERASED
    assert vote(word, [3, 4]) == 0


def test_decode_symbol_one_error_recovers():
    rs = build_simplex_structure(3)
    bit, tie = decode_symbol_errors(received([0, 1, 0, 0, 0, 0, 0]), rs, 0)
    assert (bit, tie) == (0, False)


def test_decode_symbol_two_sets_hit_fails():
    # flips in two distinct recovery sets defeat the t=3 majority
    rs = build_simplex_structure(3)
    bit, tie = decode_symbol_errors(received([0, 1, 0, 1, 0, 0, 0]), rs, 0)
    assert (bit, tie) == (1, False)


def test_decode_symbol_noiseless():
    rs = build_simplex_structure(3)
    cw = encode_simplex(3, [1, 1, 0])
    for i in range(7):
        bit, tie = decode_symbol_errors(received(cw), rs, i)
        assert bit == cw[i] and not tie


def test_tie_flag_even_t():
    # symbol with t=2: one wrong vote out of two ties, and ties decode to 1
    sets = np.array([[[1, 2], [3, 4]]] + [[[0, 2], [3, 4]]] * 4, dtype=np.int32)
    from lrc_mld.code_model import RecoveryStructure

    rs = RecoveryStructure(n=5, r=2, t=2, sets=sets)
    bit, tie = decode_symbol_errors(received([0, 1, 0, 0, 0]), rs, 0)
    assert (bit, tie) == (1, True)


def test_decode_erasures_all_sets_hit():
    rs = build_simplex_structure(3)
    word = apply([0] * 7, NoisePattern(n=7, erasures=frozenset({1, 3, 5})))
    assert decode_symbol_erasures(word, rs, 0) == FAILED


def test_decode_erasures_remaining_intact_set():
    rs = build_simplex_structure(3)
    cw = encode_simplex(3, [1, 0, 1])
    word = apply(cw, NoisePattern(n=7, erasures=frozenset({1, 2})))
    assert decode_symbol_erasures(word, rs, 0) == cw[0]


def test_decode_erasures_noiseless():
    rs = build_simplex_structure(3)
    cw = encode_simplex(3, [0, 1, 1])
    word = apply(cw, NoisePattern(n=7))
    for i in range(7):
        assert decode_symbol_erasures(word, rs, i) == cw[i]


def test_decode_word_noiseless_round_trip():
    rs = build_simplex_structure(3)
    cw = encode_simplex(3, [1, 0, 1])
    out = decode_word(apply(cw, NoisePattern(n=7)), rs, "errors")
    assert out.decoded.tolist() == cw.tolist()
    assert block_decodes(out, cw)


def test_decode_word_single_flip_all_symbols_recover():
    rs = build_simplex_structure(3)
    out = decode_word(apply([0] * 7, NoisePattern(n=7, flips=frozenset({1}))), rs, "errors")
    assert out.decoded.tolist() == [0] * 7


def test_decode_word_all_weight2_erasures_recover():
    rs = build_simplex_structure(3)
    for pat in itertools.combinations(range(7), 2):
        word = apply([0] * 7, NoisePattern(n=7, erasures=frozenset(pat)))
        out = decode_word(word, rs, "erasures")
        assert out.decoded.tolist() == [0] * 7, pat


def test_decode_word_rejects_erasures_in_error_mode():
    rs = build_simplex_structure(3)
    word = apply([0] * 7, NoisePattern(n=7, erasures=frozenset({2})))
    with pytest.raises(ValueError):
        decode_word(word, rs, "errors")


def test_decode_word_tally_invariants():
    rs = build_simplex_structure(3)
    word = apply([0] * 7, NoisePattern(n=7, erasures=frozenset({0, 1, 4})))
    out = decode_word(word, rs, "erasures")
    total = out.votes_zero + out.votes_one + out.votes_erased
    assert (total == rs.t).all()
    assert np.array_equal(out.all_sets_erased, out.votes_erased == rs.t)
    assert ((out.decoded == FAILED) == out.all_sets_erased).all()


@pytest.mark.parametrize("r", range(1, 7))
def test_vote_parity_rule_exhaustive(r):
    # a set's vote is wrong iff it contains an odd number of flips
    recovery_set = list(range(1, r + 1))
    for bits in itertools.product([0, 1], repeat=r):
        word = received([0] + list(bits) + [0])
        assert vote(word, recovery_set) == sum(bits) % 2


def test_codeword_invariance_of_failures():
    # failure set depends only on the noise pattern, not the codeword
    rs = build_simplex_structure(3)
    pattern = NoisePattern(n=7, flips=frozenset({1, 3}))
    failure_sets = []
    for msg in itertools.product([0, 1], repeat=3):
        cw = encode_simplex(3, msg)
        out = decode_word(apply(cw, pattern), rs, "errors")
        failure_sets.append(tuple(np.nonzero(out.decoded != cw)[0].tolist()))
    assert len(set(failure_sets)) == 1


def test_erasure_mode_clean_sets_agree():
    rs = build_simplex_structure(4)
    cw = encode_simplex(4, [1, 0, 1, 1])
    word = apply(cw, NoisePattern(n=15, erasures=frozenset({0, 5, 9})))
    for i in range(15):
        votes = [vote(word, s) for s in rs.sets[i]]
        clean = [v for v in votes if v != ERASED]
        assert len(set(clean)) <= 1
        if clean:
            assert clean[0] == cw[i]


def test_worst_case_weight1_errors_block_decode():
    rs = build_simplex_structure(3)
    for q in range(7):
        out = decode_word(apply([0] * 7, NoisePattern(n=7, flips=frozenset({q}))), rs, "errors")
        assert out.decoded.tolist() == [0] * 7


def test_monotone_failure_under_added_erasures():
    rs = build_simplex_structure(4)
    draws = np.random.default_rng(11)
    for _ in range(50):
        base = frozenset(draws.choice(15, size=5, replace=False).tolist())
        extra = base | frozenset(draws.choice(15, size=3, replace=False).tolist())
        out_base = decode_word(apply([0] * 15, NoisePattern(n=15, erasures=base)), rs, "erasures")
        out_more = decode_word(apply([0] * 15, NoisePattern(n=15, erasures=extra)), rs, "erasures")
        failed_base = set(np.nonzero(out_base.decoded == FAILED)[0].tolist())
        failed_more = set(np.nonzero(out_more.decoded == FAILED)[0].tolist())
        assert failed_base <= failed_more


def test_target_symbol_value_not_used_as_vote():
    # flipping only the target symbol cannot change its decoded value
    rs = build_simplex_structure(3)
    out = decode_word(apply([0] * 7, NoisePattern(n=7, flips=frozenset({0}))), rs, "errors")
    assert out.decoded[0] == 0

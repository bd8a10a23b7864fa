"""Tests for the trivial-word stream, lower spectral sequence, delta pairs,
and the union-find quotient approximation."""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grouprho.bounds import Comparison, RootBound, compare
from grouprho.cayley import build_ball, free_radial_p, walk_counts
from grouprho.dehn import DehnStrategy, Triviality
from grouprho.enumeration import (
    QuotientApprox,
    TrivialWordStream,
    all_words_of_length,
    delta_pairs,
    lower_spectral_sequence,
    reduced_words_up_to,
    trivial_counts,
)
from grouprho.intervals import EntropyExpr
from grouprho.presentation import free_group, parse_presentation
from grouprho.words import format_word, free_reduce, invert, parse_word

F2 = free_group(2)
Z7 = parse_presentation("generators: a\na^7\n", name="z7")
QUOT_A = parse_presentation("generators: a b\na\n", name="quot")
GENUS2 = parse_presentation("generators: a b c d\nabABcdCD\n", name="genus2")
POW7_3 = parse_presentation("generators: a b\n(a^3b^3)^7\n", name="pow7_3")


def take(stream: TrivialWordStream, k: int):
    return [stream.next_trivial() for _ in range(k)]


# ---------------------------------------------------------------------------
# Stream contents
# ---------------------------------------------------------------------------


def test_free_stream_prefix_is_padding_only():
    words = [format_word(w) for w in take(TrivialWordStream(F2), 8)]
    assert words == ["aA", "Aa", "bB", "Bb", "a^2A^2", "aAaA", "aA^2a", "aAbB"]


def test_free_stream_covers_all_short_trivial_spellings():
    words = take(TrivialWordStream(F2), 32)
    assert [len(w) for w in words] == [2] * 4 + [4] * 28
    brute4 = {
        w for w in all_words_of_length(2, 4) if not free_reduce(w)
    }
    assert set(words[4:]) == brute4
    assert all(not free_reduce(w) for w in words)


def test_quotient_stream_emits_generator_conjugates_first():
    words = [format_word(w) for w in take(TrivialWordStream(QUOT_A), 6)]
    assert words == ["a", "A", "baB", "bAB", "Bab", "BAb"]


def test_z7_stream_prefix():
    words = [format_word(w) for w in take(TrivialWordStream(Z7), 8)]
    assert words == ["a^7", "A^7", "a^14", "A^14", "aA", "Aa", "a^21", "A^21"]


def test_stream_never_repeats_raw_words():
    for pres in (F2, Z7, QUOT_A, GENUS2):
        words = take(TrivialWordStream(pres), 250)
        assert len(set(words)) == len(words)


def test_stream_words_are_trivial_z7_by_exponent_sum():
    for w in take(TrivialWordStream(Z7), 300):
        assert sum(w) % 7 == 0


@pytest.mark.parametrize("pres", [GENUS2, POW7_3], ids=["genus2", "pow7_3"])
def test_stream_soundness_against_dehn(pres):
    dehn = DehnStrategy(pres)
    for w in take(TrivialWordStream(pres), 200):
        assert dehn.triviality(w) is Triviality.TRIVIAL


def test_reduced_emitted_tracks_reductions():
    s = TrivialWordStream(Z7)
    take(s, 6)
    assert parse_word("a^7") in s.reduced_emitted
    assert parse_word("a^14") in s.reduced_emitted
    # padding words reduce to the identity, which is never stored
    assert () not in s.reduced_emitted


def test_reduced_words_up_to_count_and_order():
    ws = reduced_words_up_to(2, 2)
    assert len(ws) == 1 + 4 + 12
    assert ws[:5] == [(), (1,), (-1,), (2,), (-2,)]
    assert all(w == free_reduce(w) for w in ws)


# ---------------------------------------------------------------------------
# Lower spectral sequence
# ---------------------------------------------------------------------------


def test_lower_sequence_worked_values_free_group():
    assert compare(lower_spectral_sequence(F2, 4), RootBound(Fraction(1, 4), 2)) is Comparison.EQUAL
    assert compare(lower_spectral_sequence(F2, 32), RootBound(Fraction(7, 64), 4)) is Comparison.EQUAL


def test_lower_sequence_short_horizon_sees_nothing():
    # The first emitted word has length 2, beyond the n <= k horizon at k=1.
    assert lower_spectral_sequence(F2, 1) == RootBound(Fraction(0), 1)
    with pytest.raises(ValueError):
        lower_spectral_sequence(F2, 0)


def test_lower_sequence_nondecreasing():
    prev = RootBound(Fraction(0), 1)
    for k in (1, 2, 4, 8, 16, 32, 64):
        cur = lower_spectral_sequence(F2, k)
        assert compare(cur, prev) is not Comparison.LESS
        prev = cur


def test_lower_sequence_stays_below_true_value():
    # Kesten value for the free group on two generators: sqrt(3)/2.
    kesten = RootBound(Fraction(3, 4), 2)
    for k in (4, 32, 64):
        assert compare(lower_spectral_sequence(F2, k), kesten) is Comparison.LESS


def test_lower_sequence_z7():
    # First 7 emissions: a^7, A^7, a^14, A^14, aA, Aa, a^21 -> best from aA/Aa.
    assert compare(lower_spectral_sequence(Z7, 7), RootBound(Fraction(1, 2), 2)) is Comparison.EQUAL


def test_trivial_counts_histogram():
    counts = trivial_counts(F2, 32)
    assert counts == {2: 4, 4: 28}


# ---------------------------------------------------------------------------
# Delta pairs
# ---------------------------------------------------------------------------


def test_delta_pairs_covers_all_splits_of_first_word():
    dp = delta_pairs(TrivialWordStream(Z7))
    first_eight = [next(dp) for _ in range(8)]
    a, A = (1,), (-1,)
    assert first_eight == [(a * i, A * (7 - i)) for i in range(8)]
    # a^7 split after four letters pairs a^4 with (a^3)^-1
    assert (parse_word("a^4"), parse_word("A^3")) in first_eight


def test_delta_pairs_sides_are_group_equal_z7():
    dp = delta_pairs(TrivialWordStream(Z7))
    for v, w in itertools.islice(dp, 500):
        assert (sum(v) - sum(w)) % 7 == 0


def test_delta_pairs_sides_are_group_equal_genus2():
    dehn = DehnStrategy(GENUS2)
    dp = delta_pairs(TrivialWordStream(GENUS2))
    for v, w in itertools.islice(dp, 120):
        assert dehn.triviality(tuple(v) + invert(w)) is Triviality.TRIVIAL


# ---------------------------------------------------------------------------
# Quotient approximation
# ---------------------------------------------------------------------------


def test_fresh_quotient_counts_raw_words():
    q = QuotientApprox(2, max_len=3)
    assert q.class_count(1) == 5
    assert q.class_count(2) == 1 + 4 + 16
    assert q.entropy_upper_term(1) == EntropyExpr([1, 1, 1, 1])


def test_initial_entropy_is_log_alphabet():
    q = QuotientApprox(2, max_len=2)
    iv = q.entropy_upper_term(1).value_interval()
    assert float(iv.lo) <= math.log(4) <= float(iv.hi)
    assert float(iv.hi) - float(iv.lo) < 1e-30


def test_refine_merges_and_skips():
    q = QuotientApprox(2, max_len=2)
    assert q.refine((parse_word("a"), ()))
    assert q.refine((parse_word("A"), ()))
    assert not q.refine((parse_word("a"), parse_word("A")))  # already joined
    assert not q.refine((parse_word("aaa"), ()))  # too long: skipped
    assert q.pairs_consumed == 4
    assert q.merges == 2
    assert q.class_count(1) == 3


def test_class_count_monotone_under_refinement():
    q = QuotientApprox(2, max_len=2)
    dp = delta_pairs(TrivialWordStream(F2))
    last = q.class_count(2)
    for pair in itertools.islice(dp, 160):
        q.refine(pair)
        cur = q.class_count(2)
        assert cur <= last
        last = cur


def test_free_group_classes_saturate_to_ball():
    # All splits of trivial words up to length 4 identify each word of
    # length <= 2 with its free reduction and nothing else.
    q = QuotientApprox(2, max_len=2)
    dp = delta_pairs(TrivialWordStream(F2))
    n_pairs = 4 * 3 + 28 * 5  # splits of the 4+28 trivial words
    for pair in itertools.islice(dp, n_pairs):
        q.refine(pair)
    assert q.class_count(2) == 17  # 1 + 4 + 12 free ball
    assert q.class_sizes(2) == [1] * 12 + [4]


def test_entropy_term_saturates_to_walk_entropy_free_group():
    q = QuotientApprox(2, max_len=2)
    dp = delta_pairs(TrivialWordStream(F2))
    for pair in itertools.islice(dp, 4 * 3 + 28 * 5):
        q.refine(pair)
    from grouprho.dehn import strategy_for

    ball = build_ball(strategy_for(F2), 3)
    table = walk_counts(ball, 2)
    walk_sizes = sorted(c for c in table.distribution(2) if c)
    assert q.entropy_upper_term(2) == EntropyExpr(walk_sizes)


def test_entropy_term_dominates_walk_entropy_before_saturation():
    from grouprho.dehn import strategy_for

    ball = build_ball(strategy_for(F2), 3)
    table = walk_counts(ball, 2)
    h_walk = EntropyExpr([c for c in table.distribution(2) if c]).value_interval()
    q = QuotientApprox(2, max_len=2)  # no pairs consumed: finest partition
    h_up = q.entropy_upper_term(2).value_interval()
    assert float(h_up.lo) > float(h_walk.hi)


def test_partition_refines_true_classes_z7():
    # Soundness: words merged by the approximation are genuinely equal,
    # i.e. the approximate partition refines the exponent-mod-7 partition.
    q = QuotientApprox(1, max_len=6)
    dp = delta_pairs(TrivialWordStream(Z7))
    for pair in itertools.islice(dp, 20000):
        q.refine(pair)
    roots = {}
    for length in range(0, 7):
        for w in all_words_of_length(1, length):
            r = q._find(q.index_of(w))
            residue = sum(w) % 7
            assert roots.setdefault(r, residue) == residue


def test_z7_quotient_saturates_to_cyclic_group():
    q = QuotientApprox(1, max_len=7)
    dp = delta_pairs(TrivialWordStream(Z7))
    for pair in itertools.islice(dp, 60000):
        q.refine(pair)
    assert q.class_count(7) == 7


def test_class_count_bounds_true_ball_from_above():
    from grouprho.dehn import strategy_for

    ball = build_ball(strategy_for(GENUS2), 2)
    q = QuotientApprox(4, max_len=2)
    dp = delta_pairs(TrivialWordStream(GENUS2))
    for pair in itertools.islice(dp, 4000):
        q.refine(pair)
    assert q.class_count(2) >= ball.beta(2)
    assert q.class_count(1) >= ball.beta(1)


def test_observables_reject_lengths_beyond_cap():
    q = QuotientApprox(2, max_len=3)
    with pytest.raises(ValueError):
        q.class_count(4)
    with pytest.raises(ValueError):
        q.entropy_upper_term(4)


def test_constructor_validation():
    with pytest.raises(ValueError):
        QuotientApprox(0)
    with pytest.raises(ValueError):
        QuotientApprox(2, max_len=0)


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=5))
@settings(max_examples=120, deadline=None)
def test_word_indexing_roundtrip(letters):
    q = QuotientApprox(3, max_len=5)
    w = tuple(letters)
    assert q.word_of(q.index_of(w)) == w


def test_index_of_is_injective_small():
    q = QuotientApprox(2, max_len=3)
    seen = {}
    for length in range(4):
        for w in all_words_of_length(2, length):
            idx = q.index_of(w)
            assert idx not in seen
            seen[idx] = w
    assert len(seen) == q.offset[4]


def test_consume_helper_counts_merges():
    q = QuotientApprox(2, max_len=2)
    merged = q.consume(delta_pairs(TrivialWordStream(F2)), 160)
    assert merged == q.merges
    assert q.pairs_consumed == 160

"""Tests for the two-process triviality decision procedure."""

from fractions import Fraction

import pytest

from grouprho.bounds import Comparison, RootBound, compare
from grouprho.decider import (
    DecisionOutcome,
    Promise,
    Verdict,
    decide_trivial,
    interleave_schedule,
    quotient_by,
)
from grouprho.dehn import DehnStrategy, Triviality
from grouprho.presentation import (
    canonical_relator_class,
    check_small_cancellation,
    free_group,
    parse_presentation,
)
from grouprho.words import free_reduce, parse_word

F2 = free_group(2)
Z7 = parse_presentation("generators: a\na^7\n", name="z7")
POW7_3 = parse_presentation("generators: a b\n(a^3b^3)^7\n", name="pow7_3")


# ---------------------------------------------------------------------------
# Schedule
# ---------------------------------------------------------------------------


def test_schedule_alternates():
    assert interleave_schedule(4) == ["A", "B", "A", "B"]
    assert interleave_schedule(5) == ["A", "B", "A", "B", "A"]
    assert interleave_schedule(0) == []
    with pytest.raises(ValueError):
        interleave_schedule(-1)


def test_schedule_deterministic():
    assert interleave_schedule(100) == interleave_schedule(100)


# ---------------------------------------------------------------------------
# Quotient construction
# ---------------------------------------------------------------------------


def test_quotient_appends_word_as_relator():
    q = quotient_by(F2, parse_word("a"))
    assert q.n_generators == 2
    assert q.relators == ((1,),)


def test_quotient_rekilling_relator_is_identity():
    q = quotient_by(POW7_3, parse_word("(a^3b^3)^7"))
    assert q is POW7_3
    # conjugate spelling of the relator class is also recognized
    q2 = quotient_by(Z7, parse_word("A^7"))
    assert q2 is Z7


def test_quotient_of_freely_trivial_word_is_identity():
    assert quotient_by(F2, parse_word("aA")) is F2


def test_quotient_normalizes_word():
    q = quotient_by(F2, parse_word("b aA b"))  # reduces to b^2
    assert q.relators == ((2, 2),)


# ---------------------------------------------------------------------------
# Trivial verdicts
# ---------------------------------------------------------------------------


def test_freely_trivial_word_immediate():
    out = decide_trivial(F2, parse_word("aA"), 100)
    assert out.verdict is Verdict.TRIVIAL
    assert out.witness_index == 0
    assert out.rounds_used == 0


def test_relator_found_in_first_round():
    out = decide_trivial(POW7_3, parse_word("(a^3b^3)^7"), 10_000)
    assert out.verdict is Verdict.TRIVIAL
    assert out.witness_index == 1
    assert out.rounds_used == 1
    assert free_reduce(out.witness) == free_reduce(parse_word("(a^3b^3)^7"))


def test_deep_power_found_by_enumeration():
    out = decide_trivial(Z7, parse_word("a^21"), 200)
    assert out.verdict is Verdict.TRIVIAL
    assert out.witness == parse_word("a^21")
    # witness is sound per Dehn's algorithm
    assert DehnStrategy(Z7).triviality(out.witness) is Triviality.TRIVIAL


def test_conjugated_relator_found():
    out = decide_trivial(Z7, parse_word("A a^7 a"), 200)
    assert out.verdict is Verdict.TRIVIAL


# ---------------------------------------------------------------------------
# Nontrivial verdicts
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def free_letter_outcome():
    return decide_trivial(F2, parse_word("a"), 10_000, Promise(True))


def test_generator_of_free_group_certified_nontrivial(free_letter_outcome):
    out = free_letter_outcome
    assert out.verdict is Verdict.NONTRIVIAL
    k, x_k, y_k = out.certificate
    assert compare(x_k, y_k) is Comparison.LESS
    assert out.promise.declared
    # the gap sits in the amenable-vs-free window: x below 1, y near 1
    assert compare(x_k, RootBound(Fraction(1), 1)) is Comparison.LESS


def test_nontrivial_certificate_brackets_known_radii(free_letter_outcome):
    k, x_k, y_k = free_letter_outcome.certificate
    # sqrt(3)/2 <= rho(F_2) <= x_k and y_k <= rho(quotient) = 1
    kesten = RootBound(Fraction(3, 4), 2)
    assert compare(x_k, kesten) is not Comparison.LESS
    assert compare(y_k, RootBound(Fraction(1), 1)) is Comparison.LESS


def test_certificate_k_matches_b_rounds(free_letter_outcome):
    k = free_letter_outcome.certificate[0]
    # trace = A,B,A,B,...: the k-th B round is trace step 2k
    assert free_letter_outcome.rounds_used == 2 * k


# ---------------------------------------------------------------------------
# Undecided and validation
# ---------------------------------------------------------------------------


def test_budget_zero_is_undecided():
    out = decide_trivial(F2, parse_word("a"), 0)
    assert out.verdict is Verdict.UNDECIDED
    assert out.budget == 0


def test_small_budget_is_undecided():
    out = decide_trivial(F2, parse_word("a"), 10)
    assert out.verdict is Verdict.UNDECIDED
    assert out.rounds_used == 10


def test_rejects_non_small_cancellation_presentation():
    bad = parse_presentation("generators: a b\naabb\naab\n")
    assert not check_small_cancellation(bad).passes
    with pytest.raises(ValueError):
        decide_trivial(bad, parse_word("a"), 10)


def test_rejects_foreign_letters():
    with pytest.raises(ValueError):
        decide_trivial(Z7, parse_word("b"), 10)


# ---------------------------------------------------------------------------
# Determinism and soundness
# ---------------------------------------------------------------------------


def test_decision_is_reproducible():
    a = decide_trivial(F2, parse_word("a"), 2_000)
    b = decide_trivial(F2, parse_word("a"), 2_000)
    assert a == b


def test_verdicts_match_ground_truth_on_corpus():
    cases = [
        (Z7, "a^7", Verdict.TRIVIAL),
        (Z7, "a^14", Verdict.TRIVIAL),
        (F2, "abAB", Verdict.UNDECIDED),  # nontrivial but quotient is amenable-ish slow
        (F2, "bB", Verdict.TRIVIAL),
    ]
    for pres, text, expected in cases:
        out = decide_trivial(pres, parse_word(text), 60)
        assert out.verdict is expected, (pres.name, text)


def test_enumeration_fallback_used_for_non_c16_quotient():
    # killing a^21 inside z7 gives relators {a^7, a^21}: pieces of length 7
    # violate C'(1/6), forcing the counting-based lower pipeline
    q = quotient_by(Z7, parse_word("a^21"))
    assert not check_small_cancellation(q).passes
    out = decide_trivial(Z7, parse_word("a^21"), 200)
    assert out.verdict is Verdict.TRIVIAL  # process A still wins


def test_json_round_trip_shapes(free_letter_outcome):
    trivial = decide_trivial(F2, parse_word("aA"), 10).to_json()
    assert trivial["verdict"] == "trivial" and trivial["witness"] == ""
    nontriv = free_letter_outcome.to_json()
    assert nontriv["verdict"] == "nontrivial"
    assert set(nontriv["certificate"]) == {"k", "group_upper", "quotient_lower"}
    undec = decide_trivial(F2, parse_word("a"), 4).to_json()
    assert undec["verdict"] == "undecided" and undec["budget"] == 4

"""Dehn reduction, the ShortLex normal-form engine, and word-problem
strategies.

The heavyweight oracle here is purely free-group arithmetic.  In the genus-2
surface group the shortest nontrivial relation has length exactly 8 and the
length-8 trivial words are exactly the 16 symmetrized relator words (a
shorter one would, by the small-cancellation subword property, rewrite to a
still shorter nontrivial relation, and 16 - 2*arc <= 6 forces arc = 8).
Equality of words of length <= 4 is therefore decidable by free reduction
against that explicit 17-element set, with no group-theoretic machinery.
"""

import math
import random

import pytest

from grouprho.dehn import (
    DehnStrategy,
    EnumerationStrategy,
    FreeGroupStrategy,
    NormalFormOverflow,
    ShortlexNormalizer,
    Triviality,
    UndecidedError,
    ZdCubeStrategy,
    coincidence_radius,
    dehn_reduce,
    strategy_for,
)
from grouprho.presentation import Presentation, free_group, parse_presentation
from grouprho.words import (
    concat,
    cyclic_shifts,
    free_reduce,
    invert,
    letters_of_alphabet,
    parse_word,
    slex_key,
)

GENUS2 = parse_presentation("generators: a, b, c, d\nabABcdCD\n", name="genus2")
POW7_3 = parse_presentation("generators: a, b\n(a^3 b^3)^7\n", name="pow7_3")
Z7 = parse_presentation("generators: a\na^7\n", name="z7")


def symmetrized_words(p):
    out = set()
    for r in p.relators:
        for s in cyclic_shifts(r):
            out.add(s)
            out.add(invert(s))
    return out


def all_words(n_letters, max_len):
    letters = letters_of_alphabet(n_letters)
    frontier = [()]
    yield ()
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for s in letters:
                nw = w + (s,)
                nxt.append(nw)
                yield nw
        frontier = nxt


# ---------------------------------------------------------------------------
# Dehn reduction basics
# ---------------------------------------------------------------------------


def test_dehn_reduce_order_seven_cycle():
    st = DehnStrategy(Z7)
    assert st.dehn_reduce(parse_word("a^4")) == parse_word("A^3")
    assert st.dehn_reduce(parse_word("a^7")) == ()
    assert st.dehn_reduce(parse_word("a^10")) == parse_word("a^3")
    assert st.normal_form(parse_word("a^4")) == parse_word("A^3")
    assert st.is_trivial(parse_word("a^21"))
    assert not st.is_trivial(parse_word("a^20"))


def test_dehn_reduce_strictly_shrinks():
    st = DehnStrategy(GENUS2)
    w = concat(parse_word("cd"), GENUS2.relators[0], parse_word("DC"))
    red = st.dehn_reduce(w)
    assert len(red) < len(free_reduce(w))
    assert st.is_trivial(w)


def test_rejects_non_small_cancellation():
    bad = Presentation(2, (parse_word("aabb", alphabet=2), parse_word("aab", alphabet=2)))
    with pytest.raises(ValueError):
        DehnStrategy(bad)
    with pytest.raises(ValueError):
        strategy_for(bad)


def test_strategy_for_dispatch():
    assert isinstance(strategy_for(free_group(3)), FreeGroupStrategy)
    assert isinstance(strategy_for(GENUS2), DehnStrategy)


# ---------------------------------------------------------------------------
# normal form versus the free-reduction oracle
# ---------------------------------------------------------------------------


def test_genus2_exhaustive_partition_to_length_4():
    """Every pair of length<=4 words: equal in the group iff their quotient
    free-reduces into {identity} u {symmetrized relators}."""
    st = DehnStrategy(GENUS2)
    sym = symmetrized_words(GENUS2)
    assert len(sym) == 16

    reduced_of = {}
    for w in all_words(4, 4):
        reduced_of.setdefault(free_reduce(w), []).append(w)

    # oracle partition: union free-reduction classes u and sigma*u
    parent = {u: u for u in reduced_of}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in list(reduced_of):
        for sigma in sym:
            v = free_reduce(concat(sigma, u))
            if v in parent:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv

    oracle_blocks = {}
    for u, spellings in reduced_of.items():
        oracle_blocks.setdefault(find(u), []).extend(spellings)

    engine_blocks = {}
    for w in all_words(4, 4):
        engine_blocks.setdefault(st.canonical_key(w), []).append(w)

    oracle = {frozenset(b) for b in oracle_blocks.values()}
    engine = {frozenset(b) for b in engine_blocks.values()}
    assert engine == oracle


def test_genus2_length8_trivials_are_exactly_the_relator_words():
    st = DehnStrategy(GENUS2)
    sym = symmetrized_words(GENUS2)
    for w in sym:
        assert st.is_trivial(w)
    rng = random.Random(20260814)
    letters = letters_of_alphabet(4)
    found = 0
    while found < 400:
        w = []
        for _ in range(8):
            choices = [s for s in letters if not w or s != -w[-1]]
            w.append(rng.choice(choices))
        w = tuple(w)
        if w in sym:
            continue
        found += 1
        assert not st.is_trivial(w)


def test_pow7_3_short_words_behave_freely():
    # nearest relator has length 42; below half of that everything is free
    st = DehnStrategy(POW7_3)
    for w in all_words(2, 6):
        assert st.normal_form(w) == free_reduce(w)


def test_z7_partition_matches_modular_arithmetic():
    st = DehnStrategy(Z7)
    for w in all_words(1, 9):
        exponent = sum(1 if l > 0 else -1 for l in w)
        nf = st.normal_form(w)
        nf_exp = sum(1 if l > 0 else -1 for l in nf)
        assert (exponent - nf_exp) % 7 == 0
        # canonical rep is the shortlex-least in its class
        k = exponent % 7
        expected = (1,) * k if k <= 3 else (-1,) * (7 - k)
        assert nf == expected


def test_normal_form_idempotent_and_respects_inversion():
    st = DehnStrategy(GENUS2)
    rng = random.Random(20260814)
    letters = letters_of_alphabet(4)
    for _ in range(150):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, 10)))
        nf = st.normal_form(w)
        assert st.normal_form(nf) == nf
        assert slex_key(nf) <= slex_key(free_reduce(w))
        assert st.is_trivial(concat(w, invert(w)))
        assert st.normal_form(invert(w)) == st.normal_form(invert(nf))


def test_relator_conjugate_insertion_is_invisible():
    st = DehnStrategy(GENUS2)
    sym = sorted(symmetrized_words(GENUS2))
    rng = random.Random(20260814)
    letters = letters_of_alphabet(4)
    for _ in range(250):
        w = tuple(rng.choice(letters) for _ in range(rng.randint(0, 8)))
        g = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
        sigma = sym[rng.randrange(len(sym))]
        inserted_at = rng.randint(0, len(w))
        noise = concat(g, sigma, invert(g))
        padded = w[:inserted_at] + noise + w[inserted_at:]
        assert st.normal_form(padded) == st.normal_form(w)


def test_overflow_is_loud():
    st = DehnStrategy(GENUS2)
    tight = ShortlexNormalizer(st.index, max_states=1)
    with pytest.raises(NormalFormOverflow):
        tight.normal_form(parse_word("abAB"))


def test_distance_to_identity():
    st = DehnStrategy(Z7)
    assert st.distance_to_identity(parse_word("a^4")) == 3
    assert st.distance_to_identity(parse_word("a^7")) == 0


# ---------------------------------------------------------------------------
# other strategies
# ---------------------------------------------------------------------------


def test_free_strategy():
    st = FreeGroupStrategy(2)
    assert st.decides
    assert st.is_trivial(parse_word("abBA"))
    assert not st.is_trivial(parse_word("ab"))
    assert st.are_equal(parse_word("abB"), parse_word("a"))
    assert st.canonical_key(parse_word("abB")) == st.canonical_key((1,))


def test_zd_cube_strategy():
    st = ZdCubeStrategy(3)
    assert len(st.letters) == 8
    vecs = {st.vector_of_letter(l) for l in st.letters}
    assert len(vecs) == 8
    assert all(len(v) == 3 and all(c in (1, -1) for c in v) for v in vecs)
    for l in st.letters:
        v = st.vector_of_letter(l)
        w = st.vector_of_letter(-l)
        assert tuple(-c for c in v) == w
    assert st.endpoint((1, -1)) == (0, 0, 0)
    assert st.is_trivial((1, -1))
    assert not st.is_trivial((1, 2))

    line = ZdCubeStrategy(1)
    assert len(line.letters) == 2  # plain integer line
    assert line.endpoint((1, 1, -1)) == (1,)


def test_enumeration_strategy_shape():
    # free-trivial inputs resolve without spending any enumeration budget
    st = EnumerationStrategy(GENUS2, budget=10)
    assert not st.decides
    assert st.triviality(parse_word("aA")) is Triviality.TRIVIAL
    assert st._consumed == 0


# ---------------------------------------------------------------------------
# coincidence radius
# ---------------------------------------------------------------------------


def test_coincidence_radius_values():
    assert coincidence_radius(POW7_3, free_group(2)) == 21
    assert coincidence_radius(GENUS2, free_group(4)) == 4
    assert coincidence_radius(Z7, free_group(1)) == 3
    assert coincidence_radius(free_group(2), free_group(2)) == math.inf
    with pytest.raises(ValueError):
        coincidence_radius(POW7_3, GENUS2)

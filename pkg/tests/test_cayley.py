"""Ball construction, exact walk counts, and geodesics."""

from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest

from grouprho.cayley import (
    WalkCache,
    build_ball,
    build_ball_reference,
    free_radial_p,
    load_ball,
    presentation_cache_name,
    save_ball,
    shortlex_geodesic,
    walk_counts,
    _walk_counts_bigint,
    _walk_counts_numpy,
)
from grouprho.dehn import DehnStrategy, FreeGroupStrategy, ZdCubeStrategy
from grouprho.presentation import parse_presentation
from grouprho.words import parse_word

GENUS2 = parse_presentation("generators: a, b, c, d\nabABcdCD\n", name="genus2")
POW7_3 = parse_presentation("generators: a, b\n(a^3 b^3)^7\n", name="pow7_3")
Z7 = parse_presentation("generators: a\na^7\n", name="z7")


def free_ball_size(rank, n):
    """1 + sum 2k(2k-1)^(i-1): closed form for the 2k-regular tree."""
    if n == 0:
        return 1
    return 1 + sum(2 * rank * (2 * rank - 1) ** (i - 1) for i in range(1, n + 1))


def brute_free_p(rank, n):
    """Enumerate every length-n word and reduce it.  Exponential; n small."""
    letters = [i for k in range(1, rank + 1) for i in (k, -k)]
    hits = 0
    for w in product(letters, repeat=n):
        stack = []
        for l in w:
            if stack and stack[-1] == -l:
                stack.pop()
            else:
                stack.append(l)
        if not stack:
            hits += 1
    return Fraction(hits, (2 * rank) ** n)


def brute_cycle_p(order, n):
    hits = sum(1 for w in product((1, -1), repeat=n) if sum(w) % order == 0)
    return Fraction(hits, 2**n)


def cube_walk_p(d, n):
    """Product of d independent +-1 walks; exact return probability."""
    if n % 2:
        return Fraction(0)
    return Fraction(comb(n, n // 2), 2**n) ** d


# ---------------------------------------------------------------------------
# ball shapes
# ---------------------------------------------------------------------------


def test_free_ball_sizes():
    st = FreeGroupStrategy(2)
    for r in range(0, 6):
        b = build_ball(st, r)
        assert len(b) == free_ball_size(2, r)
        assert b.beta(r) == len(b)
        assert not b.saturated


def test_genus2_ball_sizes():
    st = DehnStrategy(GENUS2)
    assert len(build_ball(st, 2)) == 65
    assert len(build_ball(st, 3)) == 457


def test_pow7_3_ball_is_free_up_to_coincidence():
    st = DehnStrategy(POW7_3)
    b = build_ball(st, 6)
    for n in range(7):
        assert b.beta(n) == free_ball_size(2, n)


def test_z7_saturates():
    st = DehnStrategy(Z7)
    b = build_ball(st, 10)
    assert b.saturated and len(b) == 7
    assert (b.edges >= 0).all()  # finite group: total edge table
    assert b.beta(100) == 7


def test_zd_cube_ball():
    b3 = build_ball(ZdCubeStrategy(3), 6)
    assert len(b3) == 7**3 + 6**3  # odd and even sublattice layers
    b1 = build_ball(ZdCubeStrategy(1), 5)
    assert len(b1) == 11


def test_vertices_are_shortlex_geodesic_representatives():
    st = DehnStrategy(GENUS2)
    b = build_ball(st, 3)
    for i, w in enumerate(b.vertices):
        assert len(w) == b.dist[i]
        assert st.normal_form(w) == w


@pytest.mark.parametrize(
    "pres,radius",
    [(GENUS2, 3), (POW7_3, 3), (Z7, 9)],
)
def test_reference_builder_agrees(pres, radius):
    st = DehnStrategy(pres)
    fast = build_ball(st, radius)
    slow = build_ball_reference(st, radius)
    assert fast.vertices == slow.vertices
    assert fast.dist == slow.dist
    assert (fast.edges == slow.edges).all()
    assert fast.saturated == slow.saturated


def test_index_of():
    st = DehnStrategy(Z7)
    b = build_ball(st, 4)
    assert b.index_of(parse_word("a^8")) == b.index_of((1,))
    with pytest.raises(KeyError):
        build_ball(FreeGroupStrategy(2), 2).index_of(parse_word("a^5"))


# ---------------------------------------------------------------------------
# walk counts
# ---------------------------------------------------------------------------


def test_walks_free_group_against_brute_force():
    wt = walk_counts(build_ball(FreeGroupStrategy(2), 5), 8)
    for n in range(9):
        assert wt.p(n) == brute_free_p(2, n)


def test_walks_against_radial_oracle():
    for rank in (2, 3):
        wt = walk_counts(build_ball(FreeGroupStrategy(rank), 5), 8)
        for n in range(9):
            assert wt.p(n) == free_radial_p(rank, n)


def test_known_return_probabilities():
    f2 = walk_counts(build_ball(FreeGroupStrategy(2), 4), 4)
    assert f2.p(2) == Fraction(1, 4)
    assert f2.p(4) == Fraction(7, 64)

    ers = walk_counts(build_ball(DehnStrategy(POW7_3), 4), 4)
    assert ers.p(2) == Fraction(1, 4)
    assert ers.p(4) == Fraction(7, 64)

    line = walk_counts(build_ball(ZdCubeStrategy(1), 4), 4)
    assert line.p(2) == Fraction(1, 2)
    assert line.p(4) == Fraction(3, 8)


def test_genus2_walks_match_free_rank4_inside_coincidence():
    wt = walk_counts(build_ball(DehnStrategy(GENUS2), 4), 6)
    for n in range(7):
        assert wt.p(n) == free_radial_p(4, n)


def test_cycle_walks_against_brute_force():
    wt = walk_counts(build_ball(DehnStrategy(Z7), 5), 14)
    for n in range(15):
        assert wt.p(n) == brute_cycle_p(7, n)


def test_cube_walks_are_products_of_line_walks():
    for d in (1, 2, 3):
        wt = walk_counts(build_ball(ZdCubeStrategy(d), 4), 6)
        for n in range(7):
            assert wt.p(n) == cube_walk_p(d, n)


def test_validity_windows_enforced():
    b = build_ball(FreeGroupStrategy(2), 3)
    wt = walk_counts(b, 10)
    assert wt.returns_valid_to == 4
    assert wt.dist_valid_to == 3
    wt.p(4)
    with pytest.raises(ValueError):
        wt.p(6)
    with pytest.raises(ValueError):
        wt.distribution(4)


def test_distribution_sums_to_total_walks():
    b = build_ball(DehnStrategy(GENUS2), 3)
    wt = walk_counts(b, 3)
    for n in range(4):
        assert sum(wt.distribution(n)) == 8**n


def test_bigint_and_numpy_paths_agree():
    b = build_ball(DehnStrategy(GENUS2), 3)
    assert _walk_counts_numpy(b, 6) == _walk_counts_bigint(b, 6)


def test_bigint_path_used_for_deep_horizons():
    # 300 * log2(4) > 60 forces exact integer arithmetic
    b = build_ball(ZdCubeStrategy(1), 200)
    wt = walk_counts(b, 300)
    assert wt.p(300) == cube_walk_p(1, 300)


# ---------------------------------------------------------------------------
# radial oracle
# ---------------------------------------------------------------------------


def test_free_radial_small_cases():
    assert free_radial_p(2, 0) == 1
    assert free_radial_p(2, 1) == 0
    assert free_radial_p(2, 2) == Fraction(1, 4)
    assert free_radial_p(2, 4) == Fraction(7, 64)
    for n in range(0, 9):
        assert free_radial_p(2, n) == brute_free_p(2, n)
    with pytest.raises(ValueError):
        free_radial_p(1, 2)


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------


def test_shortlex_geodesic_wraps_the_short_way():
    b = build_ball(DehnStrategy(Z7), 6)
    target = b.index_of(parse_word("a^4"))
    path, labels = shortlex_geodesic(b, 0, target)
    assert labels == parse_word("A^3")
    assert len(path) == 4


def test_shortlex_geodesic_free_group():
    b = build_ball(FreeGroupStrategy(2), 3)
    x = b.index_of(parse_word("Ba"))
    path, labels = shortlex_geodesic(b, 0, x)
    assert labels == parse_word("Ba")
    # between two non-identity vertices
    y = b.index_of(parse_word("b"))
    _, labels2 = shortlex_geodesic(b, y, x)
    assert labels2 == parse_word("BBa")
    with pytest.raises(ValueError):
        shortlex_geodesic(b, 0, len(b) + 5)


# ---------------------------------------------------------------------------
# incremental cache
# ---------------------------------------------------------------------------


def test_walk_cache_grows_and_matches_direct_counts():
    wc = WalkCache(FreeGroupStrategy(2), initial_radius=2)
    for n in (2, 4, 6, 10):
        assert wc.p(n) == free_radial_p(2, n)

    wz = WalkCache(ZdCubeStrategy(1), initial_radius=2)
    assert wz.p(30) == cube_walk_p(1, 30)
    assert wz.p(62) == cube_walk_p(1, 62)  # forces a restart of the recurrence

    wg = WalkCache(DehnStrategy(GENUS2), initial_radius=2)
    direct = walk_counts(build_ball(DehnStrategy(GENUS2), 5), 8)
    for n in (2, 4, 8):
        assert wg.p(n) == direct.p(n)

    ws = WalkCache(DehnStrategy(Z7), initial_radius=8)
    assert ws.p(15) == brute_cycle_p(7, 15)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def test_ball_roundtrip(tmp_path):
    st = DehnStrategy(GENUS2)
    b = build_ball(st, 3)
    path = tmp_path / "ball.bin"
    save_ball(b, path)
    back = load_ball(path, st)
    assert back.vertices == b.vertices
    assert back.dist == b.dist
    assert (back.edges == b.edges).all()
    assert back.saturated == b.saturated
    assert back.index_of(parse_word("ab")) == b.index_of(parse_word("ab"))


def test_cache_names_are_stable_and_distinct():
    a = presentation_cache_name(GENUS2, 3)
    b = presentation_cache_name(GENUS2, 3)
    c = presentation_cache_name(POW7_3, 3)
    d = presentation_cache_name(GENUS2, 4)
    assert a == b and a != c and a != d

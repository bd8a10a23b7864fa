"""Centroid sets of vertex pairs and their exhaustive property checks.

For a pair (x, y) in a marked group the centroid set is the ShortLex
geodesic from x to y together with every embedded relator cycle that shares
at least one sixth of its edges with that geodesic.  This module computes
these sets exactly and verifies, over every pair (and triple) of elements in
a ball, the four properties that make the construction useful:

(a) x belongs to C(x, y);
(b) C(x, y), C(y, z), C(z, x) always have a common element;
(c) |C(x, y) ∩ B(x, r)| ≤ (2r+1)²;
(d) diam C(x, y) ≤ 5·d(x, y).

All group arithmetic runs on ShortLex geodesic normal forms supplied by the
word-problem strategy, so cycles are traced exactly even when they leave the
explored ball; the ball only supplies the vertex universe being quantified
over.  Sharing is counted in whole edges: a cycle meeting the geodesic in a
single vertex shares nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cayley import BallGraph
from .dehn import WordProblemStrategy
from .presentation import Presentation, symmetrize
from .words import Word, format_word, invert, slex_key, word_from_rank_bytes

__all__ = [
    "CRReport",
    "CRViolation",
    "CentroidSet",
    "ElementAtlas",
    "ball_intersection_bound",
    "centroid_set",
    "check_CR",
    "diameter_bound",
]


def ball_intersection_bound(r: int) -> int:
    """Cap on how much of any ball a centroid set may cover: (2r+1)²."""
    return (2 * r + 1) ** 2


def diameter_bound(distance: int) -> int:
    """Cap on the diameter of a centroid set: five times the pair distance."""
    return 5 * distance


# ---------------------------------------------------------------------------
# Element atlas: dense handles over a strategy's exact normal forms
# ---------------------------------------------------------------------------


class ElementAtlas:
    """Small-integer handles for group elements, with memoized arithmetic.

    Every element is stored once under its strategy ``canonical_key``; the
    stored representative is the ShortLex geodesic normal form, so an
    element's distance to the identity is the length of its form.  Letter
    steps are memoized in both directions (g·s and (g·s)·s⁻¹).
    """

    def __init__(self, strategy: WordProblemStrategy):
        try:
            strategy.normal_form(())
        except NotImplementedError:
            raise ValueError(
                f"{strategy.describe()} exposes no geodesic normal form; "
                "centroid computations need one"
            ) from None
        self.strategy = strategy
        self._ids: Dict[object, int] = {}
        self.forms: List[Word] = []
        self._steps: Dict[Tuple[int, int], int] = {}
        self._inverses: Dict[int, int] = {}

    def __len__(self) -> int:
        return len(self.forms)

    def intern(self, word: Sequence[int]) -> int:
        key = self.strategy.canonical_key(tuple(word))
        idx = self._ids.get(key)
        if idx is None:
            idx = len(self.forms)
            self._ids[key] = idx
            if isinstance(key, bytes):
                # The canonical key is the rank encoding of the ShortLex
                # geodesic normal form; decoding it avoids normalizing twice.
                self.forms.append(word_from_rank_bytes(key))
            else:
                self.forms.append(self.strategy.normal_form(tuple(word)))
        return idx

    def distance(self, idx: int) -> int:
        """Distance to the identity (length of the geodesic normal form)."""
        return len(self.forms[idx])

    def step(self, idx: int, letter: int) -> int:
        """Handle of element·letter."""
        key = (idx, letter)
        out = self._steps.get(key)
        if out is None:
            out = self.intern(self.forms[idx] + (letter,))
            self._steps[key] = out
            self._steps[(out, -letter)] = idx
        return out

    def product(self, left: int, right: int) -> int:
        out = left
        for letter in self.forms[right]:
            out = self.step(out, letter)
        return out

    def inverse(self, idx: int) -> int:
        out = self._inverses.get(idx)
        if out is None:
            out = self.intern(invert(self.forms[idx]))
            self._inverses[idx] = out
            self._inverses[out] = idx
        return out

    def distance_between(self, left: int, right: int) -> int:
        return len(self.forms[self.product(self.inverse(left), right)])


# ---------------------------------------------------------------------------
# Core construction
# ---------------------------------------------------------------------------


def _edge_key(u: int, v: int, letter: int) -> Tuple[int, int, int]:
    """Orientation-free identity of a labeled Cayley edge."""
    return (u, v, letter) if u <= v else (v, u, -letter)


def _relators_by_first_letter(presentation: Presentation) -> Dict[int, Tuple[Word, ...]]:
    by_first: Dict[int, List[Word]] = {}
    for w in symmetrize(presentation).distinct_words:
        by_first.setdefault(w[0], []).append(w)
    return {letter: tuple(ws) for letter, ws in by_first.items()}


def _trace_members(
    atlas: ElementAtlas,
    by_first: Dict[int, Tuple[Word, ...]],
    start: int,
    label: Word,
) -> Tuple[Tuple[int, ...], frozenset, int]:
    """Geodesic vertex handles, full centroid member set, and cycle count.

    Walks the ShortLex label from ``start``, then traces relator cycles
    anchored on each geodesic edge (a qualifying cycle shares at least one
    edge, so it traverses some geodesic edge in one of two directions and is
    found from that edge's endpoint with the matching relator rotation).
    """
    path = [start]
    v = start
    for letter in label:
        v = atlas.step(v, letter)
        path.append(v)
    members = set(path)
    n_edges = len(label)
    geo_edges = frozenset(
        _edge_key(path[i], path[i + 1], label[i]) for i in range(n_edges)
    )
    seen_cycles = set()
    if n_edges:
        anchors = []
        for i in range(n_edges):
            anchors.append((path[i], label[i]))
            anchors.append((path[i + 1], -label[i]))
        for vertex, first in anchors:
            for w in by_first.get(first, ()):
                if len(w) > 6 * n_edges:
                    continue  # cannot share |w|/6 of its edges
                verts = [vertex]
                u = vertex
                for letter in w:
                    u = atlas.step(u, letter)
                    verts.append(u)
                if verts[-1] != vertex:
                    raise ValueError(
                        "relator trace did not close; the strategy does not "
                        "present the supplied relators"
                    )
                cycle = verts[:-1]
                if len(set(cycle)) != len(cycle):
                    continue  # not embedded
                edges = frozenset(
                    _edge_key(verts[i], verts[i + 1], w[i]) for i in range(len(w))
                )
                if 6 * len(edges & geo_edges) >= len(w) and edges not in seen_cycles:
                    seen_cycles.add(edges)
                    members.update(cycle)
    return tuple(path), frozenset(members), len(seen_cycles)


@dataclass(frozen=True)
class CentroidSet:
    """A pair's geodesic plus its qualifying relator cycles, as words."""

    x: Word
    y: Word
    label: Word  # ShortLex geodesic word from x to y
    geodesic: Tuple[Word, ...]  # normal forms of the geodesic vertices
    members: frozenset  # normal forms of all vertices in the set
    cycle_count: int

    def __post_init__(self):
        if self.geodesic[0] not in self.members or self.geodesic[-1] not in self.members:
            raise ValueError("centroid set must contain its base pair")

    @property
    def distance(self) -> int:
        return len(self.label)

    def sorted_members(self) -> Tuple[Word, ...]:
        return tuple(sorted(self.members, key=slex_key))

    def to_json(self) -> dict:
        return {
            "x": format_word(self.x),
            "y": format_word(self.y),
            "label": format_word(self.label),
            "distance": self.distance,
            "members": [format_word(w) for w in self.sorted_members()],
            "cycle_count": self.cycle_count,
        }


def centroid_set(ball: BallGraph, presentation: Presentation, x: int, y: int) -> CentroidSet:
    """Centroid set of the ball vertices with indices ``x`` and ``y``.

    The geodesic label is the ShortLex normal form of x⁻¹y and cycles are
    traced through exact word arithmetic, so the result is correct even when
    qualifying cycles leave the ball.
    """
    if ball.strategy is None:
        raise ValueError("ball carries no strategy")
    V = len(ball.vertices)
    if not (0 <= x < V and 0 <= y < V):
        raise ValueError("vertex index out of range")
    atlas = ElementAtlas(ball.strategy)
    x_id = atlas.intern(ball.vertices[x])
    y_id = atlas.intern(ball.vertices[y])
    label = atlas.forms[atlas.product(atlas.inverse(x_id), y_id)]
    path, members, cycles = _trace_members(
        atlas, _relators_by_first_letter(presentation), x_id, label
    )
    if path[-1] != y_id:
        raise ValueError("ball representatives disagree with the presentation")
    return CentroidSet(
        x=atlas.forms[x_id],
        y=atlas.forms[y_id],
        label=label,
        geodesic=tuple(atlas.forms[v] for v in path),
        members=frozenset(atlas.forms[v] for v in members),
        cycle_count=cycles,
    )


# ---------------------------------------------------------------------------
# Exhaustive property verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CRViolation:
    property: str  # "a", "b", "c" or "d"
    witness: Tuple[Word, ...]  # the pair (or triple) of base vertices
    detail: str

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "witness": [format_word(w) for w in self.witness],
            "detail": self.detail,
        }


@dataclass(frozen=True)
class CRReport:
    passes: bool
    r_test: int
    vertex_count: int
    pair_classes: int
    triples_checked: int
    violation: Optional[CRViolation] = None

    def to_json(self) -> dict:
        return {
            "passes": self.passes,
            "r_test": self.r_test,
            "vertex_count": self.vertex_count,
            "pair_classes": self.pair_classes,
            "triples_checked": self.triples_checked,
            "violation": None if self.violation is None else self.violation.to_json(),
        }


def _class_checks(
    atlas: ElementAtlas,
    e_id: int,
    members: frozenset,
    path: Tuple[int, ...],
    r_test: int,
    witness: Tuple[Word, Word],
) -> Optional[CRViolation]:
    """Properties (a), (c), (d) for the translation class of one pair."""
    if e_id not in members:
        return CRViolation("a", witness, "base point missing from its centroid set")
    dists = sorted(atlas.distance(m) for m in members)
    count = 0
    i = 0
    for r in range(r_test + 1):
        while i < len(dists) and dists[i] <= r:
            i += 1
        count = i
        bound = ball_intersection_bound(r)
        if count > bound:
            return CRViolation(
                "c",
                witness,
                f"|C ∩ B(x,{r})| = {count} exceeds (2·{r}+1)² = {bound}",
            )
    distance = len(path) - 1
    allowed = diameter_bound(distance)
    # Via the identity, diam ≤ 2·max distance; compute exactly only if that
    # cheap bound does not already certify the property.
    if 2 * dists[-1] > allowed:
        handles = sorted(members)
        diam = 0
        for a in range(len(handles)):
            for b in range(a + 1, len(handles)):
                d = atlas.distance_between(handles[a], handles[b])
                if d > diam:
                    diam = d
        if diam > allowed:
            return CRViolation(
                "d",
                witness,
                f"diameter {diam} exceeds 5·d(x,y) = {allowed}",
            )
    return None


def check_CR(ball: BallGraph, presentation: Presentation, r_test: int) -> CRReport:
    """Exhaustively verify properties (a)-(d) over the radius-``r_test`` ball.

    Properties (a), (c), (d) are invariant under left translation, so they
    are checked once per distinct x⁻¹y class; property (b) is checked for
    every triple (x, y, z) up to cyclic rotation, which permutes the three
    centroid sets.  The first violation in this fixed order is reported.
    """
    if ball.strategy is None:
        raise ValueError("ball carries no strategy")
    if r_test < 0:
        raise ValueError("r_test must be >= 0")
    if r_test > ball.radius:
        raise ValueError(f"r_test {r_test} exceeds ball radius {ball.radius}")

    atlas = ElementAtlas(ball.strategy)
    by_first = _relators_by_first_letter(presentation)
    vertex_ids = [
        atlas.intern(ball.vertices[i])
        for i in range(len(ball.vertices))
        if ball.dist[i] <= r_test
    ]
    vertex_words = [atlas.forms[v] for v in vertex_ids]
    V = len(vertex_ids)
    e_id = atlas.intern(())
    inverses = [atlas.inverse(v) for v in vertex_ids]

    # Pass 1: per-class data and the translation-invariant checks.
    class_data: Dict[int, Tuple[Tuple[int, ...], frozenset]] = {}
    pair_class: List[List[int]] = [[0] * V for _ in range(V)]
    for i in range(V):
        inv_i = inverses[i]
        row = pair_class[i]
        for j in range(V):
            u_id = atlas.product(inv_i, vertex_ids[j])
            row[j] = u_id
            if u_id not in class_data:
                path, members, _ = _trace_members(atlas, by_first, e_id, atlas.forms[u_id])
                class_data[u_id] = (path, members)
                witness = (vertex_words[i], vertex_words[j])
                bad = _class_checks(atlas, e_id, members, path, r_test, witness)
                if bad is not None:
                    return CRReport(False, r_test, V, len(class_data), 0, bad)

    # Pass 2: translated member sets for every ordered pair.
    pair_sets: List[List[frozenset]] = [[frozenset()] * V for _ in range(V)]
    for i in range(V):
        x_id = vertex_ids[i]
        row_cls = pair_class[i]
        row_out = pair_sets[i]
        translated: Dict[int, frozenset] = {}
        for j in range(V):
            u_id = row_cls[j]
            got = translated.get(u_id)
            if got is None:
                base = class_data[u_id][1]
                got = frozenset(atlas.product(x_id, c) for c in base)
                translated[u_id] = got
            row_out[j] = got

    # Pass 3: triple intersections, one representative per cyclic rotation.
    triples = 0
    for i in range(V):
        row_i = pair_sets[i]
        for j in range(i, V):
            c_xy = row_i[j]
            row_j = pair_sets[j]
            for k in range(i, V):
                triples += 1
                common = c_xy & row_j[k]
                if not common or common.isdisjoint(pair_sets[k][i]):
                    witness = (vertex_words[i], vertex_words[j], vertex_words[k])
                    return CRReport(
                        False,
                        r_test,
                        V,
                        len(class_data),
                        triples,
                        CRViolation("b", witness, "triple intersection is empty"),
                    )
    return CRReport(True, r_test, V, len(class_data), triples)

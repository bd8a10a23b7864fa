"""Group presentations, relator symmetrization and small-cancellation checks.

The piece convention follows Lyndon--Schupp: a piece is a common prefix of
two *distinct* words of the symmetrized relator set (all cyclic shifts of
every relator and of every inverse relator).  Under this convention the
self-overlaps of a proper power are not pieces; proper powers are flagged in
the report so callers can opt into a stricter policy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .words import (
    Word,
    alphabet_size_of,
    common_prefix_len,
    cyclic_reduce,
    cyclic_shifts,
    format_word,
    invert,
    parse_word,
    slex_key,
)


def canonical_relator_class(relator: Sequence[int]) -> Word:
    """ShortLex-least word among all cyclic shifts of ``r`` and ``r^-1``.

    Two relators generate the same set of symmetrized words exactly when
    their classes coincide, so this is the right key for deduplication and
    for relator-set comparison between presentations.
    """
    r = cyclic_reduce(relator)
    if not r:
        raise ValueError("relator is trivial after cyclic reduction")
    candidates = list(cyclic_shifts(r)) + list(cyclic_shifts(invert(r)))
    return min(candidates, key=slex_key)


@dataclass(frozen=True)
class Presentation:
    """A finite presentation; relators are stored cyclically reduced.

    Duplicate relators (up to cyclic shifts and inversion) are rejected
    rather than silently dropped, so that relator indices stay meaningful.
    """

    n_generators: int
    relators: Tuple[Word, ...]
    name: str = ""

    def __post_init__(self):
        n = alphabet_size_of(self.n_generators)
        reduced = tuple(cyclic_reduce(r) for r in self.relators)
        for r in reduced:
            if not r:
                raise ValueError("empty relator (trivial after cyclic reduction)")
            if any(abs(x) > n for x in r):
                raise ValueError(f"relator {format_word(r)} uses letters outside the alphabet")
        classes = [canonical_relator_class(r) for r in reduced]
        if len(set(classes)) != len(classes):
            raise ValueError("duplicate relators (equal up to cyclic shift / inversion)")
        object.__setattr__(self, "relators", reduced)

    @property
    def alphabet_size(self) -> int:
        return self.n_generators

    def relator_classes(self) -> frozenset:
        return frozenset(canonical_relator_class(r) for r in self.relators)

    def with_relator(self, relator: Sequence[int], name: str = "") -> "Presentation":
        """A new presentation with one extra relator appended."""
        return Presentation(
            self.n_generators,
            self.relators + (cyclic_reduce(relator),),
            name or self.name,
        )

    def describe(self) -> str:
        gens = ",".join(chr(ord("a") + i) for i in range(self.n_generators))
        rels = "; ".join(format_word(r) for r in self.relators) or "-"
        return f"<{gens} | {rels}>"


@dataclass(frozen=True)
class Occurrence:
    relator_index: int
    shift: int
    inverted: bool
    word: Word


@dataclass(frozen=True)
class SymmetrizedSet:
    """Every cyclic shift of every relator and of its inverse.

    ``occurrences`` keeps full provenance (relator, shift, orientation);
    ``distinct_words`` is the deduplicated word set the piece definition
    quantifies over.  ``words_of_relator[i]`` are the distinct words that are
    shifts of relator i or of its inverse.
    """

    occurrences: Tuple[Occurrence, ...]
    distinct_words: Tuple[Word, ...]
    words_of_relator: Tuple[Tuple[Word, ...], ...]

    @property
    def max_relator_length(self) -> int:
        return max((len(o.word) for o in self.occurrences), default=0)


def symmetrize(p: Presentation) -> SymmetrizedSet:
    occurrences: List[Occurrence] = []
    seen: Dict[Word, int] = {}
    per_relator: List[set] = [set() for _ in p.relators]
    for idx, r in enumerate(p.relators):
        for inverted, base in ((False, r), (True, invert(r))):
            for shift, w in enumerate(cyclic_shifts(base)):
                occurrences.append(Occurrence(idx, shift, inverted, w))
                seen.setdefault(w, idx)
                per_relator[idx].add(w)
    distinct = tuple(sorted(seen, key=slex_key))
    words_of = tuple(tuple(sorted(ws, key=slex_key)) for ws in per_relator)
    return SymmetrizedSet(tuple(occurrences), distinct, words_of)


def _is_proper_power(relator: Word) -> bool:
    n = len(relator)
    for period in range(1, n):
        if n % period == 0 and relator == relator[period:] + relator[:period]:
            return True
    return False


@dataclass(frozen=True)
class PieceReport:
    """Longest piece occurring inside each relator's symmetrized words."""

    max_piece_len: Tuple[int, ...]
    witnesses: Tuple[Word, ...]  # a longest piece per relator (empty word if none)


def max_pieces(sym: SymmetrizedSet) -> PieceReport:
    """Per-relator maximum piece length.

    A piece occurs as a subword of a shift of r (or r^-1) iff it is a prefix
    of one of r's symmetrized words, so it suffices to take, for each word u
    of r's set, the longest common prefix between u and any *other* word of
    the whole distinct set.  In sorted order the maximizing partner of u is
    one of its two neighbours, which turns the quadratic pair scan into a
    single sorted sweep.  (The quadratic scan is kept in the test suite as
    the reference oracle.)
    """
    words = sorted(sym.distinct_words)
    lcp_best: Dict[Word, int] = {w: 0 for w in words}
    for a, b in zip(words, words[1:]):
        k = common_prefix_len(a, b)
        if k > lcp_best[a]:
            lcp_best[a] = k
        if k > lcp_best[b]:
            lcp_best[b] = k
    best_len: List[int] = []
    best_piece: List[Word] = []
    for ws in sym.words_of_relator:
        n, piece = 0, ()
        for u in ws:
            if lcp_best[u] > n:
                n = lcp_best[u]
                piece = u[:n]
        best_len.append(n)
        best_piece.append(piece)
    return PieceReport(tuple(best_len), tuple(best_piece))


@dataclass(frozen=True)
class CancellationReport:
    passes: bool
    lam: Fraction
    worst_piece: Word
    worst_relator: int  # index, or -1 when there are no relators
    worst_ratio: Fraction
    proper_power_flags: Tuple[bool, ...]
    max_piece_len: Tuple[int, ...]

    def __str__(self):
        verdict = "passes" if self.passes else "FAILS"
        return (
            f"C'({self.lam}) {verdict}: worst piece {format_word(self.worst_piece)!r}"
            f" ratio {self.worst_ratio}"
        )


def check_small_cancellation(p: Presentation, lam: Fraction = Fraction(1, 6)) -> CancellationReport:
    """C'(lam) check: every piece inside relator r must have |piece| < lam*|r|.

    Comparisons are exact: |p| * lam.denominator < lam.numerator * |r|.
    A presentation with no relators passes vacuously.
    """
    lam = Fraction(lam)
    sym = symmetrize(p)
    pieces = max_pieces(sym)
    passes = True
    worst_ratio = Fraction(0)
    worst_piece: Word = ()
    worst_relator = -1
    for idx, r in enumerate(p.relators):
        plen = pieces.max_piece_len[idx]
        if plen * lam.denominator >= lam.numerator * len(r):
            passes = False
        ratio = Fraction(plen, len(r))
        if worst_relator == -1 or ratio > worst_ratio:
            worst_ratio = ratio
            worst_piece = pieces.witnesses[idx]
            worst_relator = idx
    flags = tuple(_is_proper_power(r) for r in p.relators)
    return CancellationReport(
        passes=passes,
        lam=lam,
        worst_piece=worst_piece,
        worst_relator=worst_relator,
        worst_ratio=worst_ratio,
        proper_power_flags=flags,
        max_piece_len=pieces.max_piece_len,
    )


# ---------------------------------------------------------------------------
# Presentation file format
# ---------------------------------------------------------------------------

def parse_presentation(text: str, name: str = "") -> Presentation:
    """Parse the ``.grp`` text format.

    Line 1: ``generators: a, b`` (commas/spaces optional).  Every following
    nonempty line that does not start with ``#`` is one relator in the word
    grammar.
    """
    lines = text.splitlines()
    header = None
    relators: List[Word] = []
    n_gens: Optional[int] = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            if not line.lower().startswith("generators:"):
                raise ValueError(f"line {lineno}: expected 'generators:' header")
            header = line[len("generators:"):]
            n_gens = alphabet_size_of(header)
            continue
        relators.append(parse_word(line, n_gens))
    if n_gens is None:
        raise ValueError("missing 'generators:' header")
    return Presentation(n_gens, tuple(relators), name=name)


def load_presentation(path) -> Presentation:
    import os

    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    base = os.path.splitext(os.path.basename(str(path)))[0]
    return parse_presentation(text, name=base)


# Handy builders used across the test-suite and the demo corpus.

def free_group(rank: int) -> Presentation:
    return Presentation(rank, (), name=f"free{rank}")

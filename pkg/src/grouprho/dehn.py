"""Word-problem strategies: Dehn's algorithm for C'(1/6) presentations,
free groups, cube-generated lattices, and budgeted enumeration.

The Dehn engine also provides canonical ShortLex-geodesic representatives.
Canonical forms are computed by a bounded closure: starting from the Dehn
reduction of the input, all words reachable by replacing a sufficiently long
relator arc with the inverse of its complement are explored, pruned at a
length cap, and the ShortLex-least visited word is returned.  Every move
follows a relator cycle, so merges are always sound; the arc-length floor and
the cap are chosen from the small-cancellation geometry (an arc longer than
every piece pins down a unique relator position) and are cross-validated in
the test-suite against the pairwise Dehn equality oracle.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .presentation import (
    Presentation,
    check_small_cancellation,
    symmetrize,
)
from .words import (
    Word,
    common_prefix_len,
    free_reduce,
    invert,
    letters_of_alphabet,
    rank_bytes,
    slex_key,
    word_from_rank_bytes,
)


class Triviality(enum.Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNKNOWN = "unknown"


class UndecidedError(RuntimeError):
    """Raised when a semi-decision strategy is asked for a definite answer."""


class NormalFormOverflow(RuntimeError):
    """The canonical-form closure exceeded its state budget.

    Raised loudly instead of returning a possibly non-minimal word.
    """


def _inv_byte(b: int) -> int:
    return b ^ 1


def _free_reduce_bytes(data: bytes) -> bytes:
    stack = bytearray()
    for c in data:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return bytes(stack)


def _invert_bytes(data: bytes) -> bytes:
    return bytes(c ^ 1 for c in reversed(data))


class SymmetrizedIndex:
    """Matching tables for the symmetrized relator words of a presentation.

    Words are handled both as letter tuples (public API) and as rank-byte
    strings (inner loops).  For each symmetrized word rho we precompute:

    * ``half``  -- the Dehn threshold floor(|rho|/2) + 1; a match of at least
      this length is "more than half of rho" and can always be shortened;
    * ``m_req`` -- the canonical-form floor floor(|rho|/6) + 1, one more than
      the longest possible piece, so any match of this length identifies the
      relator occurrence uniquely;
    * the inverted complements ``invert(rho[l:])`` for every cut point l.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        sym = symmetrize(presentation)
        self.sym = sym
        self.words: Tuple[Word, ...] = sym.distinct_words
        self.by_first: Dict[int, List[Word]] = {}
        for w in self.words:
            self.by_first.setdefault(w[0], []).append(w)

        self.half: Dict[Word, int] = {w: len(w) // 2 + 1 for w in self.words}
        self.m_req: Dict[Word, int] = {w: len(w) // 6 + 1 for w in self.words}

        # Byte-level tables for the closure engine.
        self._by_first_byte: Dict[int, List[Tuple[bytes, int, bytes]]] = {}
        # entries: (rho_bytes, m_req, complements) where complements[l] is the
        # rank-byte form of invert(rho[l:]); index 0..len(rho).
        self._complements: Dict[bytes, Tuple[bytes, ...]] = {}
        for w in self.words:
            wb = rank_bytes(w)
            comps = tuple(rank_bytes(invert(w[l:])) for l in range(len(w) + 1))
            self._complements[wb] = comps
            self._by_first_byte.setdefault(wb[0], []).append((wb, self.m_req[w], wb))
        # Fast trigger test: grams of length m_req grouped by m_req value.
        self._trigger: List[Tuple[int, frozenset]] = []
        by_m: Dict[int, set] = {}
        for w in self.words:
            m = self.m_req[w]
            by_m.setdefault(m, set()).add(rank_bytes(w[:m]))
        self._trigger = sorted((m, frozenset(g)) for m, g in by_m.items())
        self.max_relator_length = max((len(w) for w in self.words), default=0)

    def half_grams(self) -> Dict[int, frozenset]:
        """For each Dehn threshold t, the set of length-t arc grams.

        A freely reduced word contains more than half of some symmetrized
        word iff it contains one of these grams; used by the enumeration
        oracles as a sound nontriviality filter.
        """
        out: Dict[int, set] = {}
        for w in self.words:
            t = self.half[w]
            out.setdefault(t, set()).add(w[:t])
        return {t: frozenset(g) for t, g in out.items()}

    def find_half_match(self, word: Word) -> Optional[Tuple[int, int, Word]]:
        """Leftmost, then longest subword exceeding half of a symmetrized word.

        Returns (position, match_length, rho) or None.
        """
        n = len(word)
        for i in range(n):
            best: Optional[Tuple[int, Word]] = None
            for rho in self.by_first.get(word[i], ()):
                limit = min(n - i, len(rho))
                k = common_prefix_len(word[i : i + limit], rho[:limit])
                if 2 * k > len(rho) and (best is None or k > best[0]):
                    best = (k, rho)
            if best is not None:
                return (i, best[0], best[1])
        return None


def dehn_reduce(word: Sequence[int], index) -> Word:
    """Dehn's algorithm: repeatedly replace a subword that is more than half
    of a symmetrized relator by the inverse of the complement, freely
    reducing in between; stops at a Dehn-irreducible word.

    ``index`` is a SymmetrizedIndex or a Presentation (C'(1/6) required for
    the triviality guarantee; this is enforced by DehnStrategy, not here).
    """
    if isinstance(index, Presentation):
        index = SymmetrizedIndex(index)
    w = free_reduce(word)
    while True:
        hit = index.find_half_match(w)
        if hit is None:
            return w
        i, k, rho = hit
        w = free_reduce(w[:i] + invert(rho[k:]) + w[i + k :])


class ShortlexNormalizer:
    """Canonical ShortLex-geodesic representatives for C'(1/6) presentations.

    ``normal_form`` returns the ShortLex-least word representing the same
    group element, which doubles as an exact equality key and a distance
    oracle (the length of the normal form is the distance to the identity).
    """

    def __init__(self, index: SymmetrizedIndex, extra_slack: int = 0, max_states: int = 200_000):
        self.index = index
        base = 0
        for w in index.words:
            base = max(base, len(w) - 2 * index.m_req[w])
        self.slack = base + extra_slack
        self.max_states = max_states

    # -- byte-level core ---------------------------------------------------

    def _has_trigger(self, data: bytes) -> bool:
        for m, grams in self.index._trigger:
            if len(data) < m:
                continue
            for i in range(len(data) - m + 1):
                if data[i : i + m] in grams:
                    return True
        return False

    def nf_bytes(self, data: bytes) -> bytes:
        data = _free_reduce_bytes(data)
        if not self.index.words or not data:
            return data
        # No arc reaches the rewrite floor: the word is alone in its closure.
        if not self._has_trigger(data):
            return data
        data = self._dehn_bytes(data)
        if not data or not self._has_trigger(data):
            return data
        return self._closure_min(data)

    def _dehn_bytes(self, data: bytes) -> bytes:
        by_first = self.index._by_first_byte
        complements = self.index._complements
        while True:
            n = len(data)
            hit = None
            for i in range(n):
                cands = by_first.get(data[i])
                if not cands:
                    continue
                best_k = 0
                best_rho = None
                for rho, _m, _ in cands:
                    limit = min(n - i, len(rho))
                    k = 0
                    while k < limit and data[i + k] == rho[k]:
                        k += 1
                    if 2 * k > len(rho) and k > best_k:
                        best_k, best_rho = k, rho
                if best_rho is not None:
                    hit = (i, best_k, best_rho)
                    break
            if hit is None:
                return data
            i, k, rho = hit
            data = _free_reduce_bytes(data[:i] + complements[rho][k] + data[i + k :])

    def _closure_min(self, start: bytes) -> bytes:
        by_first = self.index._by_first_byte
        complements = self.index._complements
        slack = self.slack
        best = start
        best_key = (len(start), start)
        min_len = len(start)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            n = len(x)
            if n > min_len + slack:
                continue
            for i in range(n):
                cands = by_first.get(x[i])
                if not cands:
                    continue
                tail_len = n - i
                for rho, m_req, _ in cands:
                    limit = min(tail_len, len(rho))
                    k = 0
                    while k < limit and x[i + k] == rho[k]:
                        k += 1
                    if k < m_req:
                        continue
                    comps = complements[rho]
                    for cut in range(m_req, k + 1):
                        y = _free_reduce_bytes(x[:i] + comps[cut] + x[i + cut :])
                        if len(y) > min_len + slack or y in seen:
                            continue
                        seen.add(y)
                        if len(seen) > self.max_states:
                            raise NormalFormOverflow(
                                f"canonical-form closure exceeded {self.max_states} states"
                            )
                        key = (len(y), y)
                        if key < best_key:
                            best, best_key = y, key
                            if len(y) < min_len:
                                min_len = len(y)
                        stack.append(y)
        return best

    # -- public word-level API ----------------------------------------------

    def normal_form(self, word: Sequence[int]) -> Word:
        return word_from_rank_bytes(self.nf_bytes(rank_bytes(free_reduce(word))))


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


class WordProblemStrategy:
    """Decides triviality of words over a fixed symmetric alphabet."""

    #: number of generators (the alphabet has 2x letters)
    n_generators: int
    #: strategies that always return a definite verdict
    decides: bool = True

    @property
    def letters(self) -> Word:
        return letters_of_alphabet(self.n_generators)

    def triviality(self, word: Sequence[int]) -> Triviality:
        raise NotImplementedError

    def is_trivial(self, word: Sequence[int]) -> bool:
        verdict = self.triviality(word)
        if verdict is Triviality.UNKNOWN:
            raise UndecidedError(f"{self.describe()} could not decide the word")
        return verdict is Triviality.TRIVIAL

    def are_equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_trivial(tuple(u) + invert(v))

    def canonical_key(self, word: Sequence[int]):
        """Exact equality key: two words get the same key iff they represent
        the same group element.  When the key is ``bytes`` it must be the
        rank encoding of the element's ShortLex geodesic normal form.
        Unsupported for semi-decision strategies."""
        raise NotImplementedError

    def normal_form(self, word: Sequence[int]) -> Word:
        """ShortLex-least geodesic word for the same element (where known)."""
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


class FreeGroupStrategy(WordProblemStrategy):
    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be >= 1")
        self.n_generators = rank

    def triviality(self, word):
        return Triviality.TRIVIAL if not free_reduce(word) else Triviality.NONTRIVIAL

    def canonical_key(self, word):
        return rank_bytes(free_reduce(word))

    def normal_form(self, word):
        return free_reduce(word)

    def describe(self):
        return f"FreeGroup(rank={self.n_generators})"


class DehnStrategy(WordProblemStrategy):
    """Dehn's algorithm on a verified C'(1/6) presentation."""

    def __init__(self, presentation: Presentation, lam: Fraction = Fraction(1, 6)):
        report = check_small_cancellation(presentation, lam)
        if not report.passes:
            raise ValueError(
                f"presentation {presentation.describe()} is not C'({lam}): {report}"
            )
        self.presentation = presentation
        self.report = report
        self.n_generators = presentation.n_generators
        self.index = SymmetrizedIndex(presentation)
        self.normalizer = ShortlexNormalizer(self.index)

    def dehn_reduce(self, word: Sequence[int]) -> Word:
        return dehn_reduce(word, self.index)

    def triviality(self, word):
        return Triviality.TRIVIAL if not self.dehn_reduce(word) else Triviality.NONTRIVIAL

    def normal_form(self, word: Sequence[int]) -> Word:
        return self.normalizer.normal_form(word)

    def canonical_key(self, word):
        return self.normalizer.nf_bytes(rank_bytes(free_reduce(word)))

    def distance_to_identity(self, word: Sequence[int]) -> int:
        return len(self.canonical_key(word))

    def describe(self):
        return f"Dehn({self.presentation.name or self.presentation.describe()})"


class ZdCubeStrategy(WordProblemStrategy):
    """Z^d marked with the 2^d cube vectors {+-1}^d.

    Generator i (1-based, i <= 2^(d-1)) is the vector with first coordinate
    +1 whose remaining coordinates are read off the bits of i-1 (set bit ->
    -1); the inverse letter is the negated vector, so all 2^d cube vectors
    appear exactly once.
    """

    def __init__(self, d: int):
        if not 1 <= d <= 8:
            raise ValueError("cube dimension must be in 1..8")
        self.d = d
        self.n_generators = 1 << (d - 1)
        self._vectors: Dict[int, Tuple[int, ...]] = {}
        for i in range(1, self.n_generators + 1):
            bits = i - 1
            vec = [1] + [(-1 if (bits >> j) & 1 else 1) for j in range(d - 1)]
            self._vectors[i] = tuple(vec)
            self._vectors[-i] = tuple(-x for x in vec)

    def vector_of_letter(self, letter: int) -> Tuple[int, ...]:
        return self._vectors[letter]

    def endpoint(self, word: Sequence[int]) -> Tuple[int, ...]:
        pos = [0] * self.d
        for letter in word:
            vec = self._vectors[letter]
            for j in range(self.d):
                pos[j] += vec[j]
        return tuple(pos)

    def triviality(self, word):
        zero = all(c == 0 for c in self.endpoint(word))
        return Triviality.TRIVIAL if zero else Triviality.NONTRIVIAL

    def canonical_key(self, word):
        return self.endpoint(word)

    def describe(self):
        return f"ZdCube(d={self.d})"


class EnumerationStrategy(WordProblemStrategy):
    """Semi-decision by normal-closure enumeration under a word budget.

    ``triviality`` returns UNKNOWN when the budget runs out; callers must
    not read UNKNOWN as nontrivial.  ``canonical_key`` is unsupported.
    """

    decides = False

    def __init__(self, presentation: Presentation, budget: int):
        self.presentation = presentation
        self.budget = budget
        self.n_generators = presentation.n_generators
        self._stream = None
        self._consumed = 0
        self.last_outcome: Optional[str] = None

    def _reductions_up_to_budget(self):
        from .enumeration import TrivialWordStream

        if self._stream is None:
            self._stream = TrivialWordStream(self.presentation)
        while self._consumed < self.budget:
            self._stream.next_trivial()
            self._consumed += 1
        return self._stream.reduced_emitted

    def triviality(self, word):
        target = free_reduce(word)
        if not target:
            self.last_outcome = "trivial"
            return Triviality.TRIVIAL
        if self._stream is not None and target in self._stream.reduced_emitted:
            self.last_outcome = "trivial"
            return Triviality.TRIVIAL
        if target in self._reductions_up_to_budget():
            self.last_outcome = "trivial"
            return Triviality.TRIVIAL
        self.last_outcome = "budget-exhausted"
        return Triviality.UNKNOWN

    def describe(self):
        return f"Enumeration({self.presentation.name or '?'}, budget={self.budget})"


def strategy_for(presentation: Presentation) -> WordProblemStrategy:
    """The natural decidable strategy: free reduction when there are no
    relators, otherwise Dehn's algorithm (raising unless C'(1/6) holds)."""
    if not presentation.relators:
        return FreeGroupStrategy(presentation.n_generators)
    return DehnStrategy(presentation)


# ---------------------------------------------------------------------------
# Coincidence radius
# ---------------------------------------------------------------------------


def coincidence_radius(p1: Presentation, p2: Presentation):
    """floor(min |r| / 2) over relators in the symmetric difference of the
    relator sets (compared up to cyclic shifts and inversion); math.inf when
    the relator sets agree.  Balls of radius n of the two marked groups are
    isomorphic whenever n + 1 <= this value.
    """
    if p1.n_generators != p2.n_generators:
        raise ValueError("presentations use different alphabets")
    diff = p1.relator_classes() ^ p2.relator_classes()
    if not diff:
        return math.inf
    return min(len(r) for r in diff) // 2

"""Semi-decision machinery: normal-closure enumeration, the lower spectral
sequence, and word-pair quotient approximations.

Nothing in this module decides anything.  The stream produces trivial words
(sound by construction: every output is a product of relator conjugates, or
a padding of one), and the derived sequences approach their limits from one
side only.  Completeness is a limit statement: under an unbounded budget
every trivial word of the free monoid is eventually emitted.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from .bounds import Comparison, RootBound, compare
from .intervals import EntropyExpr
from .presentation import Presentation
from .words import (
    Word,
    concat,
    free_reduce,
    invert,
    letter_of_rank,
    letters_of_alphabet,
    rank_of_letter,
)

__all__ = [
    "TrivialWordStream",
    "QuotientApprox",
    "all_words_of_length",
    "reduced_words_up_to",
    "delta_pairs",
    "lower_spectral_sequence",
    "trivial_counts",
]


def all_words_of_length(n_letters: int, length: int) -> Iterator[Word]:
    """All words of S^length in rank order (the ShortLex order within a
    fixed length)."""
    letters = letters_of_alphabet(n_letters)
    return itertools.product(letters, repeat=length)


def reduced_words_up_to(n_letters: int, max_len: int) -> List[Word]:
    """Freely reduced words of length <= max_len in ShortLex order."""
    letters = letters_of_alphabet(n_letters)
    out: List[Word] = [()]
    frontier: List[Word] = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                nxt.append(w + (s,))
        out.extend(nxt)
        frontier = nxt
    return out


class TrivialWordStream:
    """Fair enumeration of the Word Problem set {w in S* : w = e in G}.

    Round m interleaves two phases:

    * products: freely reduced products of at most m conjugates
      g r^{+-1} g^{-1} with |g| <= m, in a fixed deterministic order,
      deduplicated by their free reduction;
    * padding: every raw word of length <= m (identity excluded) whose free
      reduction is empty or was emitted earlier.  This covers the unreduced
      spellings that return-probability counts need.

    For a free presentation the product phase is empty and the stream is
    exactly the raw words that freely reduce to the identity, ordered by
    length then rank.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.reduced_emitted: Set[Word] = set()
        self._raw_emitted: Set[Word] = set()
        self.emitted_count = 0
        self._round = 0
        self._gen = self._generate()

    def next_trivial(self) -> Word:
        w = next(self._gen)
        self.emitted_count += 1
        return w

    def __iter__(self) -> Iterator[Word]:
        while True:
            yield self.next_trivial()

    # -- internals ---------------------------------------------------------

    def _conjugates(self, m: int) -> List[Word]:
        """g r^{+-1} g^{-1} as freely reduced words, in schedule order.

        Distinct conjugators can reduce to the same word (always, in a
        one-generator group); duplicates generate identical products, so
        keeping only the first occurrence changes nothing about the set of
        words the stream emits while collapsing exponential tuple waste.
        """
        seen: Set[Word] = set()
        out: List[Word] = []
        for g in reduced_words_up_to(self.presentation.n_generators, m):
            for r in self.presentation.relators:
                for rel in (r, invert(r)):
                    w = free_reduce(concat(g, rel, invert(g)))
                    if w and w not in seen:
                        seen.add(w)
                        out.append(w)
        return out

    def _walk_products(self, conj: List[Word], prefix: Word, depth: int, m: int, seen):
        """Depth-first product enumeration with duplicate-subtree pruning.

        Two partial products with the same free reduction generate the same
        completions, so only the first occurrence at a given depth recurses.
        The set of words emitted per round — all freely reduced products of
        at most m conjugates — is unchanged.
        """
        for c in conj:
            w = free_reduce(concat(prefix, c))
            if w and w not in self.reduced_emitted:
                self.reduced_emitted.add(w)
                self._raw_emitted.add(w)
                yield w
            if depth + 1 < m:
                if w in seen[depth + 1]:
                    continue
                seen[depth + 1].add(w)
                yield from self._walk_products(conj, w, depth + 1, m, seen)

    def _generate(self) -> Iterator[Word]:
        n = self.presentation.n_generators
        while True:
            self._round += 1
            m = self._round
            if self.presentation.relators:
                conj = self._conjugates(m)
                seen = [set() for _ in range(m + 1)]
                yield from self._walk_products(conj, (), 0, m, seen)
            for length in range(1, m + 1):
                for w in all_words_of_length(n, length):
                    if w in self._raw_emitted:
                        continue
                    red = free_reduce(w)
                    if not red or red in self.reduced_emitted:
                        self._raw_emitted.add(w)
                        if red:
                            self.reduced_emitted.add(red)
                        yield w


def delta_pairs(stream: TrivialWordStream) -> Iterator[Tuple[Word, Word]]:
    """Pairs of words equal in the group: each trivial t = v u yields
    (v, u^{-1}), over every split point, fairly over the stream."""
    for t in stream:
        for i in range(len(t) + 1):
            yield t[:i], invert(t[i:])


def trivial_counts(presentation: Presentation, k: int) -> dict:
    """Length histogram of the first k emitted trivial words."""
    stream = TrivialWordStream(presentation)
    counts: dict = {}
    for _ in range(k):
        w = stream.next_trivial()
        counts[len(w)] = counts.get(len(w), 0) + 1
    return counts


def lower_spectral_sequence(presentation: Presentation, k: int) -> RootBound:
    """x_k = max over 1 <= n <= k of (count_k(n)/|S|^n)^{1/n}, where
    count_k(n) is the number of length-n words among the first k emitted
    trivial words.  Nondecreasing in k; converges to the spectral radius
    from below."""
    if k < 1:
        raise ValueError("k must be >= 1")
    counts = trivial_counts(presentation, k)
    size = 2 * presentation.n_generators
    best = RootBound(Fraction(0), 1)
    for n, c in counts.items():
        if 1 <= n <= k:
            cand = RootBound(Fraction(c, size**n), n)
            if compare(cand, best) is Comparison.GREATER:
                best = cand
    return best


# ---------------------------------------------------------------------------
# Quotient approximations by union-find
# ---------------------------------------------------------------------------


class QuotientApprox:
    """Union-find approximation of the group quotient on S^{<= max_len}.

    Words are addressed arithmetically (length-major, rank digits), so the
    structure is two flat integer arrays over sum |S|^j cells.  Merges only
    ever coarsen; every merge is justified by a consumed pair of words equal
    in the group, so class counts over-approximate the true element counts
    from above and entropies from above.
    """

    def __init__(self, n_letters: int, max_len: int = 8):
        if n_letters < 1:
            raise ValueError("need at least one generator")
        if max_len < 1:
            raise ValueError("max_len must be >= 1")
        self.n_letters = n_letters
        self.L = 2 * n_letters
        self.max_len = max_len
        self.offset = [0]
        for j in range(max_len + 1):
            self.offset.append(self.offset[-1] + self.L**j)
        total = self.offset[-1]
        self._parent = list(range(total))
        self._size = [1] * total
        self.pairs_consumed = 0
        self.merges = 0

    # -- word addressing ----------------------------------------------------

    def index_of(self, word: Sequence[int]) -> int:
        idx = 0
        for l in word:
            idx = idx * self.L + rank_of_letter(l)
        return self.offset[len(word)] + idx

    def word_of(self, index: int) -> Word:
        length = 0
        while self.offset[length + 1] <= index:
            length += 1
        rem = index - self.offset[length]
        digits = []
        for _ in range(length):
            rem, d = divmod(rem, self.L)
            digits.append(d)
        return tuple(letter_of_rank(d) for d in reversed(digits))

    # -- union-find ---------------------------------------------------------

    def _find(self, x: int) -> int:
        parent = self._parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def refine(self, pair: Tuple[Sequence[int], Sequence[int]]) -> bool:
        """Consume one pair of group-equal words; returns True if it merged
        two classes.  Pairs with a side longer than max_len are skipped but
        still counted as consumed."""
        v, w = pair
        self.pairs_consumed += 1
        if len(v) > self.max_len or len(w) > self.max_len:
            return False
        a, b = self._find(self.index_of(v)), self._find(self.index_of(w))
        if a == b:
            return False
        if self._size[a] < self._size[b]:
            a, b = b, a
        self._parent[b] = a
        self._size[a] += self._size[b]
        self.merges += 1
        return True

    def consume(self, pairs, limit: int) -> int:
        """Refine with up to ``limit`` pairs from an iterable; returns the
        number of merges performed."""
        done = 0
        for pair in itertools.islice(pairs, limit):
            if self.refine(pair):
                done += 1
        return done

    # -- observables ---------------------------------------------------------

    def class_count(self, n: int) -> int:
        """Number of equivalence classes within S^{<= n} (an upper bound on
        the ball size beta(n))."""
        if n > self.max_len:
            raise ValueError(f"n={n} beyond materialized length {self.max_len}")
        roots = {self._find(i) for i in range(self.offset[n + 1])}
        return len(roots)

    def class_sizes(self, n: int) -> List[int]:
        """Sizes of the classes partitioning exactly S^n."""
        if n > self.max_len:
            raise ValueError(f"n={n} beyond materialized length {self.max_len}")
        sizes: dict = {}
        for i in range(self.offset[n], self.offset[n + 1]):
            r = self._find(i)
            sizes[r] = sizes.get(r, 0) + 1
        return sorted(sizes.values())

    def entropy_upper_term(self, n: int) -> EntropyExpr:
        """Exact entropy expression of the ~_k partition of S^n under the
        uniform word measure; an upper bound for the walk entropy H(X_n)."""
        return EntropyExpr(self.class_sizes(n))

    def classes_of(self, words: Sequence[Sequence[int]]) -> List[int]:
        return [self._find(self.index_of(w)) for w in words]

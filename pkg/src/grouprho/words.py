"""Free-group word algebra over single-letter alphabets.

A word is a tuple of nonzero ints: ``+k`` is the k-th generator (1-based),
``-k`` its inverse.  The printable alphabet is ``a..z`` for generators and
``A..Z`` for inverses, so ``(1, -2)`` renders as ``"aB"``.  Unreduced words
are first-class; reduction is always an explicit call.
"""

from __future__ import annotations

from typing import Iterator, Sequence, Tuple

Word = Tuple[int, ...]

#: Largest alphabet the textual grammar supports (a..z).
MAX_TEXT_ALPHABET = 26

#: Largest alphabet supported internally (rank bytes must fit in one byte).
MAX_ALPHABET = 128

EMPTY: Word = ()


class WordSyntaxError(ValueError):
    """Malformed word text; ``position`` is the 0-based offending index."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def letter_from_char(ch: str) -> int:
    """Map ``a`` -> 1, ``A`` -> -1, ``b`` -> 2, ..."""
    if "a" <= ch <= "z":
        return ord(ch) - ord("a") + 1
    if "A" <= ch <= "Z":
        return -(ord(ch) - ord("A") + 1)
    raise ValueError(f"not a letter: {ch!r}")


def char_from_letter(letter: int) -> str:
    idx = abs(letter) - 1
    if letter == 0 or idx >= MAX_TEXT_ALPHABET:
        raise ValueError(f"letter out of printable range: {letter}")
    return chr(ord("A" if letter < 0 else "a") + idx)


def alphabet_size_of(alphabet) -> int:
    """Normalize an alphabet spec (int count, or string like ``"ab"``)."""
    if isinstance(alphabet, int):
        n = alphabet
    else:
        chars = [c for c in str(alphabet) if not c.isspace() and c != ","]
        if any(not ("a" <= c <= "z") for c in chars):
            bad = next(c for c in chars if not ("a" <= c <= "z"))
            raise ValueError(f"generator names must be lowercase ascii letters, got {bad!r}")
        if len(set(chars)) != len(chars):
            raise ValueError(f"duplicate generator name in {alphabet!r}")
        # Generators must be an initial segment a, b, c, ... so that letter
        # values coincide with positions in every context.
        expected = [chr(ord("a") + i) for i in range(len(chars))]
        if sorted(chars) != expected:
            raise ValueError(f"generators must be a,b,c,... without gaps, got {alphabet!r}")
        n = len(chars)
    if not 1 <= n <= MAX_ALPHABET:
        raise ValueError(f"alphabet size {n} out of range 1..{MAX_ALPHABET}")
    return n


def letters_of_alphabet(n: int) -> Word:
    """All 2n signed letters in rank order: a, A, b, B, ..."""
    out = []
    for i in range(1, n + 1):
        out.append(i)
        out.append(-i)
    return tuple(out)


class _Parser:
    def __init__(self, text: str, n_gens: int):
        self.text = text
        self.n = len(text)
        self.pos = 0
        self.n_gens = n_gens

    def _skip_ws(self) -> None:
        while self.pos < self.n and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < self.n else ""

    def word(self, *, top: bool) -> list:
        out: list = []
        while True:
            self._skip_ws()
            ch = self._peek()
            if ch == "" or ch == ")":
                if ch == ")" and top:
                    raise WordSyntaxError("unmatched ')'", self.pos)
                return out
            out.extend(self.factor())

    def factor(self) -> list:
        atom = self.atom()
        self._skip_ws()
        if self._peek() == "^":
            self.pos += 1
            k = self.integer()
            if k < 0:
                atom = [-x for x in reversed(atom)]
                k = -k
            return atom * k
        return atom

    def atom(self) -> list:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self.word(top=False)
            if self._peek() != ")":
                raise WordSyntaxError("missing ')'", self.pos)
            self.pos += 1
            return inner
        if ch.isalpha():
            letter = letter_from_char(ch)
            if abs(letter) > self.n_gens:
                raise WordSyntaxError(f"unknown letter {ch!r}", self.pos)
            self.pos += 1
            return [letter]
        raise WordSyntaxError(f"expected letter or '(', got {ch!r}" if ch else "unexpected end of input", self.pos)

    def integer(self) -> int:
        self._skip_ws()
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        if not self._peek().isdigit():
            raise WordSyntaxError("expected integer after '^'", self.pos)
        while self._peek().isdigit():
            self.pos += 1
        return int(self.text[start : self.pos])


def parse_word(text: str, alphabet=MAX_TEXT_ALPHABET) -> Word:
    """Parse word text into the literal (unreduced) word.

    Grammar: ``word := factor*``, ``factor := atom ("^" int)?``,
    ``atom := letter | "(" word ")"``; whitespace separates factors.
    Lowercase letters are generators, uppercase their inverses; ``^k``
    repeats and ``^-k`` repeats the inverse; ``^0`` yields an empty factor.
    """
    n_gens = alphabet_size_of(alphabet)
    parser = _Parser(text, n_gens)
    return tuple(parser.word(top=True))


def format_word(word: Sequence[int]) -> str:
    """Serialize compactly with run-length exponents, e.g. ``a^3B``."""
    if not word:
        return ""
    out = []
    i, n = 0, len(word)
    while i < n:
        j = i
        while j < n and word[j] == word[i]:
            j += 1
        ch = char_from_letter(word[i])
        run = j - i
        out.append(ch if run == 1 else f"{ch}^{run}")
        i = j
    return "".join(out)


def free_reduce(word: Sequence[int]) -> Word:
    """The unique freely reduced word equal to ``word`` in the free group."""
    stack: list = []
    for letter in word:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def is_reduced(word: Sequence[int]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def cyclic_reduce(word: Sequence[int]) -> Word:
    """Freely reduce, then strip mutually inverse first/last letters."""
    w = free_reduce(word)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return w[lo:hi]


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    if not is_reduced(word):
        return False
    return len(word) < 2 or word[0] != -word[-1]


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def concat(*words: Sequence[int]) -> Word:
    out: Word = ()
    for w in words:
        out = out + tuple(w)
    return out


def multiply(u: Sequence[int], v: Sequence[int]) -> Word:
    """Freely reduced product; the group operation on reduced words."""
    return free_reduce(tuple(u) + tuple(v))


def conjugate(g: Sequence[int], w: Sequence[int]) -> Word:
    """g w g^-1, freely reduced."""
    return free_reduce(tuple(g) + tuple(w) + invert(g))


def rank_of_letter(letter: int) -> int:
    """Total order on letters: a < A < b < B < ...; inverse flips bit 0."""
    return ((abs(letter) - 1) << 1) | (letter < 0)


def letter_of_rank(rank: int) -> int:
    idx = (rank >> 1) + 1
    return -idx if rank & 1 else idx


def rank_bytes(word: Sequence[int]) -> bytes:
    return bytes(rank_of_letter(x) for x in word)


def word_from_rank_bytes(data: bytes) -> Word:
    return tuple(letter_of_rank(b) for b in data)


def slex_key(word: Sequence[int]):
    """ShortLex sort key: by length, then letter ranks."""
    return (len(word), rank_bytes(word))


def cyclic_shifts(word: Sequence[int]) -> Iterator[Word]:
    w = tuple(word)
    for i in range(len(w)):
        yield w[i:] + w[:i]


def common_prefix_len(u: Sequence[int], v: Sequence[int]) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n

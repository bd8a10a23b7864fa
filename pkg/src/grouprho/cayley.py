"""Cayley-ball construction, exact walk counts, and the free-group radial
walk oracle.

Vertices of a ball are canonical representative words: the ShortLex-least
geodesic spelling, realized as first discovery in a breadth-first search that
scans parents in index order and letters in rank order.  Equality of group
elements during the search is decided through the strategy's canonical key
(hash-exact); the literal pairwise variant ``build_ball_reference`` checks a
candidate against the neighbouring BFS levels with ``are_equal`` instead and
is kept as a cross-validation oracle for the tests.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .dehn import WordProblemStrategy
from .words import Word, free_reduce, invert, rank_of_letter

__all__ = [
    "BallGraph",
    "WalkTable",
    "WalkCache",
    "build_ball",
    "build_ball_reference",
    "walk_counts",
    "free_radial_p",
    "shortlex_geodesic",
    "save_ball",
    "load_ball",
]


@dataclass
class BallGraph:
    """Radius-r ball of a Cayley graph.

    ``edges[v][c]`` is the target of the letter with rank c at vertex v, or
    -1 when the edge was not explored (possible only between two vertices on
    the boundary sphere, or towards the outside).  Rows of vertices at
    distance < radius are always total.  ``saturated`` means the BFS ran out
    of new elements before the radius: the whole (finite) group is present
    and every row is total.
    """

    radius: int
    n_letters: int
    vertices: List[Word]
    dist: List[int]
    edges: np.ndarray  # int32, shape (len(vertices), n_letters)
    saturated: bool
    strategy: Optional[WordProblemStrategy] = None
    _key_to_index: Optional[dict] = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def beta(self, n: int) -> int:
        """Number of group elements within distance n (n <= radius)."""
        if n > self.radius and not self.saturated:
            raise ValueError(f"beta({n}) beyond ball radius {self.radius}")
        return sum(1 for d in self.dist if d <= n)

    def sphere_sizes(self) -> List[int]:
        out = [0] * (max(self.dist) + 1)
        for d in self.dist:
            out[d] += 1
        return out

    def index_of(self, word: Sequence[int]) -> int:
        """Vertex index of the element spelled by ``word`` (must be in the ball)."""
        if self.strategy is None or self._key_to_index is None:
            raise ValueError("ball carries no strategy index")
        key = self.strategy.canonical_key(tuple(word))
        try:
            return self._key_to_index[key]
        except KeyError:
            raise KeyError("element is outside the ball") from None


def _letters_in_rank_order(strategy: WordProblemStrategy) -> Word:
    letters = strategy.letters
    assert list(letters) == sorted(letters, key=rank_of_letter)
    return letters


def build_ball(strategy: WordProblemStrategy, radius: int) -> BallGraph:
    """Breadth-first ball construction with canonical-key equality.

    Scanning parents in index order and letters in rank order enumerates the
    level-(d+1) candidate spellings in ShortLex order, so the first spelling
    that discovers an element is its ShortLex-least geodesic word.
    """
    if not strategy.decides:
        raise ValueError("ball construction requires a strategy that decides equality")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    letters = _letters_in_rank_order(strategy)
    L = len(letters)
    verts: List[Word] = [()]
    key_to_idx: Dict = {strategy.canonical_key(()): 0}
    dist: List[int] = [0]
    rows: List[List[int]] = [[-1] * L]
    level: List[int] = [0]
    saturated = False
    for d in range(radius):
        nxt: List[int] = []
        for u in level:
            wu = verts[u]
            row = rows[u]
            for col in range(L):
                if row[col] != -1:
                    continue
                s = letters[col]
                key = strategy.canonical_key(wu + (s,))
                idx = key_to_idx.get(key)
                if idx is None:
                    idx = len(verts)
                    key_to_idx[key] = idx
                    verts.append(wu + (s,))
                    dist.append(d + 1)
                    rows.append([-1] * L)
                    nxt.append(idx)
                row[col] = idx
                rows[idx][col ^ 1] = u  # the inverse letter has adjacent rank
        if not nxt:
            saturated = True
            break
        level = nxt
    edges = np.array(rows, dtype=np.int32) if rows else np.empty((0, L), dtype=np.int32)
    return BallGraph(radius, L, verts, dist, edges, saturated, strategy, key_to_idx)


def build_ball_reference(strategy: WordProblemStrategy, radius: int) -> BallGraph:
    """Pairwise-equality ball builder (test oracle).

    A candidate spelling of length d+1 can only denote an element already
    seen at BFS levels d-1, d, or earlier in level d+1 (triangle inequality),
    so the scan is restricted to those levels.  Quadratic; small radii only.
    """
    if not strategy.decides:
        raise ValueError("ball construction requires a strategy that decides equality")
    letters = _letters_in_rank_order(strategy)
    L = len(letters)
    verts: List[Word] = [()]
    dist: List[int] = [0]
    rows: List[List[int]] = [[-1] * L]
    levels: List[List[int]] = [[0]]
    saturated = False
    for d in range(radius):
        nxt: List[int] = []
        for u in levels[d]:
            wu = verts[u]
            row = rows[u]
            for col in range(L):
                if row[col] != -1:
                    continue
                s = letters[col]
                w = wu + (s,)
                idx = None
                scan = (levels[d - 1] if d >= 1 else []) + levels[d] + nxt
                for v in scan:
                    if strategy.are_equal(w, verts[v]):
                        idx = v
                        break
                if idx is None:
                    idx = len(verts)
                    verts.append(w)
                    dist.append(d + 1)
                    rows.append([-1] * L)
                    nxt.append(idx)
                row[col] = idx
                rows[idx][col ^ 1] = u
        if not nxt:
            saturated = True
            break
        levels.append(nxt)
    edges = np.array(rows, dtype=np.int32) if rows else np.empty((0, L), dtype=np.int32)
    return BallGraph(radius, L, verts, dist, edges, saturated, strategy, None)


# ---------------------------------------------------------------------------
# Walk counts
# ---------------------------------------------------------------------------


@dataclass
class WalkTable:
    """Exact word counts N(g; n) = #{length-n words evaluating to g}.

    Return probabilities are valid for n <= 2*(radius-1): a returning walk
    stays within distance floor(n/2), where every edge row is total.  Full
    distributions are valid for n <= radius.  Saturated balls are the whole
    group, and every n is valid.
    """

    n_letters: int
    n_max: int
    counts: List[List[int]]  # counts[n][v], exact integers
    returns_valid_to: int
    dist_valid_to: int

    def return_count(self, n: int) -> int:
        if n > self.returns_valid_to:
            raise ValueError(
                f"return count at n={n} not certified by this ball (valid to {self.returns_valid_to})"
            )
        return self.counts[n][0]

    def p(self, n: int) -> Fraction:
        """Return probability p(n) as an exact rational."""
        return Fraction(self.return_count(n), self.n_letters**n)

    def distribution(self, n: int) -> List[int]:
        if n > self.dist_valid_to:
            raise ValueError(
                f"distribution at n={n} not certified by this ball (valid to {self.dist_valid_to})"
            )
        return self.counts[n]


def walk_counts(ball: BallGraph, n_max: int) -> WalkTable:
    """Dynamic programming N(g; k+1) = sum_s N(g s^-1; k) over ball vertices.

    Unexplored edge slots contribute nothing; that is exact within the
    validity ranges documented on WalkTable.  Counts use numpy int64 when
    |S|^n_max provably fits, arbitrary-precision integers otherwise.
    """
    V = len(ball.vertices)
    L = ball.n_letters
    if ball.saturated:
        returns_valid = dist_valid = n_max
    else:
        returns_valid = min(n_max, 2 * (ball.radius - 1)) if ball.radius >= 1 else 0
        dist_valid = min(n_max, ball.radius)
    if n_max * L.bit_length() <= 60 and V > 0:
        counts = _walk_counts_numpy(ball, n_max)
    else:
        counts = _walk_counts_bigint(ball, n_max)
    return WalkTable(L, n_max, counts, returns_valid, dist_valid)


def _walk_counts_numpy(ball: BallGraph, n_max: int) -> List[List[int]]:
    V = len(ball.vertices)
    cur = np.zeros(V + 1, dtype=np.int64)  # one sentinel slot for index -1
    cur[0] = 1
    out = [[1] + [0] * (V - 1)]
    E = ball.edges
    for _ in range(n_max):
        nxt = cur[:-1][E]  # (V, L) gather; -1 hits the sentinel
        nxt = np.where(E >= 0, nxt, 0).sum(axis=1)
        cur = np.concatenate([nxt, [0]])
        out.append([int(x) for x in nxt])
    return out


def _walk_counts_bigint(ball: BallGraph, n_max: int) -> List[List[int]]:
    V = len(ball.vertices)
    nbrs: List[List[int]] = [
        [t for t in row if t >= 0] for row in ball.edges.tolist()
    ]
    cur = [0] * V
    if V:
        cur[0] = 1
    out = [list(cur)]
    for _ in range(n_max):
        nxt = [0] * V
        for v, row in enumerate(nbrs):
            total = 0
            for t in row:
                total += cur[t]
            nxt[v] = total
        cur = nxt
        out.append(list(cur))
    return out


class WalkCache:
    """Incrementally extendable return-probability pipeline for a strategy.

    Doubling the ball radius preserves vertex indices (BFS discovery order
    does not depend on the radius bound), so the DP continues from the last
    column after zero-padding it to the new vertex count.
    """

    def __init__(self, strategy: WordProblemStrategy, initial_radius: int = 4):
        self.strategy = strategy
        self.ball = build_ball(strategy, initial_radius)
        self.L = self.ball.n_letters
        self._col: List[int] = [0] * len(self.ball.vertices)
        self._col[0] = 1
        self._step = 0
        self._returns: List[int] = [1]
        self._nbrs = [[t for t in row if t >= 0] for row in self.ball.edges.tolist()]

    def _valid_to(self) -> int:
        if self.ball.saturated:
            return 1 << 62
        return 2 * (self.ball.radius - 1)

    def _grow(self, needed_n: int) -> None:
        old_radius = self.ball.radius
        # Track the requested horizon: ball sizes grow geometrically with the
        # radius, so rebuild cost is dominated by the final ball anyway.
        radius = max((needed_n + 3) // 2, old_radius + 1)
        old_count = len(self.ball.vertices)
        ball = build_ball(self.strategy, radius)
        assert ball.vertices[:old_count] == self.ball.vertices, "BFS prefix changed"
        self.ball = ball
        self._col = self._col + [0] * (len(ball.vertices) - old_count)
        self._nbrs = [[t for t in row if t >= 0] for row in ball.edges.tolist()]
        # The zero-padded column equals the true count vector only while no
        # length-step walk could have left the old explored region, i.e. for
        # step <= old radius.  Beyond that, restart the recurrence.
        if self._step > old_radius:
            self._recompute()

    def _recompute(self) -> None:
        step = self._step
        self._col = [0] * len(self.ball.vertices)
        self._col[0] = 1
        self._returns = [1]
        self._step = 0
        self._advance_to(step)

    def _advance_to(self, n: int) -> None:
        while self._step < n:
            nxt = [0] * len(self._col)
            col = self._col
            for v, row in enumerate(self._nbrs):
                total = 0
                for t in row:
                    total += col[t]
                nxt[v] = total
            self._col = nxt
            self._step += 1
            self._returns.append(nxt[0])

    def p(self, n: int) -> Fraction:
        """Exact p(n), growing the ball as needed."""
        while n > self._valid_to():
            self._grow(n)
        self._advance_to(n)
        return Fraction(self._returns[n], (self.L) ** n)


# ---------------------------------------------------------------------------
# Free-group radial oracle
# ---------------------------------------------------------------------------


def free_radial_p(rank: int, n: int) -> Fraction:
    """Exact return probability of the simple random walk on the free group
    of the given rank, via 1-D dynamic programming on distance from the
    origin in the 2*rank-regular tree.  Odd n gives 0.
    """
    if rank < 2:
        raise ValueError("radial oracle requires rank >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n % 2 == 1:
        return Fraction(0)
    k2 = 2 * rank
    half = n // 2
    # counts[d] = number of length-t words whose reduction has length d
    counts = [0] * (half + 2)
    counts[0] = 1
    for t in range(n):
        nxt = [0] * (half + 2)
        limit = min(t, half) + 1
        for d in range(limit):
            c = counts[d]
            if not c:
                continue
            if d == 0:
                nxt[1] += c * k2
            else:
                nxt[d - 1] += c
                if d + 1 < len(nxt):
                    nxt[d + 1] += c * (k2 - 1)
        counts = nxt
    return Fraction(counts[0], k2**n)


# ---------------------------------------------------------------------------
# ShortLex geodesics inside a ball
# ---------------------------------------------------------------------------


def shortlex_geodesic(ball: BallGraph, x: int, y: int) -> Tuple[List[int], Word]:
    """ShortLex-least geodesic from vertex x to vertex y inside the ball.

    Distances are taken in the ball's edge graph (equal to word distance for
    interior pairs).  Returns (vertex path, letter labels).  Raises when y is
    not reachable from x within the ball.
    """
    V = len(ball.vertices)
    if not (0 <= x < V and 0 <= y < V):
        raise ValueError("vertex index out of range")
    letters = _letters_in_rank_order(ball.strategy) if ball.strategy else None
    INF = -1
    dist_y = [INF] * V
    dist_y[y] = 0
    frontier = [y]
    while frontier and dist_y[x] == INF:
        nxt = []
        for v in frontier:
            for t in ball.edges[v].tolist():
                if t >= 0 and dist_y[t] == INF:
                    dist_y[t] = dist_y[v] + 1
                    nxt.append(t)
        frontier = nxt
    if dist_y[x] == INF:
        raise ValueError("vertices not connected within the ball")
    path = [x]
    labels: List[int] = []
    v = x
    while v != y:
        row = ball.edges[v]
        for col in range(ball.n_letters):
            t = int(row[col])
            if t >= 0 and dist_y[t] == dist_y[v] - 1:
                v = t
                path.append(v)
                if letters is not None:
                    labels.append(letters[col])
                break
        else:  # pragma: no cover - dist_y guarantees a descent exists
            raise AssertionError("no descending edge found")
    return path, tuple(labels)


# ---------------------------------------------------------------------------
# Optional binary ball cache
# ---------------------------------------------------------------------------

_CACHE_VERSION = 1


def save_ball(ball: BallGraph, path) -> None:
    """Little-endian binary dump: version byte, vertex count, letter count,
    radius, saturated flag, then the dense int32 edge table."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<BIIIB", _CACHE_VERSION, len(ball.vertices), ball.n_letters, ball.radius, int(ball.saturated)))
        fh.write(ball.edges.astype("<i4").tobytes())


def load_ball(path, strategy: Optional[WordProblemStrategy] = None) -> BallGraph:
    with open(path, "rb") as fh:
        version, count, L, radius, saturated = struct.unpack("<BIIIB", fh.read(14))
        if version != _CACHE_VERSION:
            raise ValueError(f"unsupported ball cache version {version}")
        data = np.frombuffer(fh.read(count * L * 4), dtype="<i4").reshape(count, L).astype(np.int32)
    # Rebuild representatives and distances by replaying the BFS over edges.
    verts: List[Word] = [()] * count
    dist = [-1] * count
    dist[0] = 0
    letters = _letters_in_rank_order(strategy) if strategy else None
    order = [0]
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for col in range(L):
            t = int(data[u][col])
            if t >= 0 and dist[t] == -1:
                dist[t] = dist[u] + 1
                if letters is not None:
                    verts[t] = verts[u] + (letters[col],)
                order.append(t)
    key_index = None
    if strategy is not None:
        key_index = {strategy.canonical_key(w): i for i, w in enumerate(verts)}
    return BallGraph(radius, L, verts, dist, data, bool(saturated), strategy, key_index)


def presentation_cache_name(presentation, radius: int) -> str:
    """Stable cache key from the presentation text and radius."""
    from .words import format_word

    blob = f"{presentation.n_generators}|" + "|".join(
        format_word(r) for r in presentation.relators
    )
    digest = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return f"ball_{digest}_r{radius}.bin"

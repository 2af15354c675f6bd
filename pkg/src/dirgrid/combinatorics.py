"""Exact finders for the Ramsey-flavoured steps: monotone subsequences,
transitive subtournaments and clean sub-cliques of labelled cliques.

None of these computes an existence threshold; each searches the instance it
is given, exhaustively below a budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Mapping, Sequence

from .digraph import Digraph
from .errors import Budget, InvalidInput


def longest_monotone_subsequence(seq: Sequence) -> list:
    """Longest increasing or decreasing subsequence of distinct items.

    Increasing wins ties, and among equally long candidates the one with the
    lexicographically least index tuple is returned.
    """
    if len(set(seq)) != len(seq):
        raise InvalidInput("items must be distinct")
    if not seq:
        return []
    inc = _longest(seq, lambda a, b: a < b)
    dec = _longest(seq, lambda a, b: a > b)
    best = inc if len(inc) >= len(dec) else dec
    return [seq[i] for i in best]


def _longest(seq: Sequence, ok) -> tuple[int, ...]:
    n = len(seq)
    # best[i]: lexicographically least longest chain starting at i
    best: list[tuple[int, ...]] = [()] * n
    for i in range(n - 1, -1, -1):
        tail: tuple[int, ...] = ()
        for j in range(i + 1, n):
            if ok(seq[i], seq[j]):
                cand = best[j]
                if len(cand) > len(tail) or (len(cand) == len(tail) and cand < tail):
                    tail = cand
        best[i] = (i,) + tail
    return min(best, key=lambda c: (-len(c), c))


def is_tournament(T: Digraph) -> bool:
    pairs = set()
    for t, h in T.edges.values():
        if t == h:
            return False
        key = frozenset((t, h))
        if key in pairs:
            return False
        pairs.add(key)
    n = len(T)
    return len(pairs) == n * (n - 1) // 2


def transitive_subtournament(T: Digraph, k: int, budget: int | Budget | None = None) -> frozenset[int] | None:
    """Lexicographically least ``k``-set inducing a transitive subtournament, or ``None``."""
    if not is_tournament(T):
        raise InvalidInput("input is not a tournament")
    if k < 0:
        raise InvalidInput("k must be non-negative")
    bud = Budget.of(budget, "transitive_subtournament")
    beats = {v: set(T.successors(v)) for v in T.vertices}
    for S in combinations(T.vertices, k):
        bud.tick()
        # a tournament is transitive iff its out-degrees are all distinct
        outs = {sum(1 for w in S if w in beats[v]) for v in S}
        if len(outs) == len(S):
            return frozenset(S)
    return None


@dataclass(frozen=True)
class LabeledClique:
    """Complete graph on ``vertices`` with a label set on every unordered pair."""

    vertices: tuple[Hashable, ...]
    labels: Mapping[frozenset, frozenset]

    @classmethod
    def build(cls, vertices: Iterable[Hashable], labels: Mapping | None = None) -> "LabeledClique":
        vs = tuple(sorted(vertices))
        lab = {frozenset(p): frozenset() for p in combinations(vs, 2)}
        for pair, ls in (labels or {}).items():
            lab[frozenset(pair)] = frozenset(ls)
        return cls(vs, lab)

    def check(self) -> None:
        vs = set(self.vertices)
        for pair, ls in self.labels.items():
            if len(pair) != 2 or not pair <= vs:
                raise InvalidInput(f"label on a non-edge {sorted(pair)}")
            if ls & pair:
                raise InvalidInput(f"edge {sorted(pair)} labelled by its own end")
            if not ls <= vs:
                raise InvalidInput(f"edge {sorted(pair)} has labels outside the vertex set")


@dataclass(frozen=True)
class CleanClique:
    vertices: tuple


@dataclass(frozen=True)
class LabelCover:
    edges: tuple[frozenset, ...]
    vertices: tuple


def is_clean(L: LabeledClique, S: Iterable) -> bool:
    S = set(S)
    return all(not (L.labels[frozenset(p)] & S) for p in combinations(sorted(S), 2))


def is_cover(L: LabeledClique, edges: Iterable[frozenset], vertices: Iterable) -> bool:
    W = set(vertices)
    return all(W <= L.labels[frozenset(e)] for e in edges)


def clean_clique_or_cover(
    L: LabeledClique, n: int, m1: int, m2: int, budget: int | Budget | None = None
) -> CleanClique | LabelCover | None:
    """A clean ``n``-clique, else an ``(m1 edges, m2 vertices)`` label cover, else ``None``.

    ``None`` is only returned after both searches were exhaustive; running out
    of budget raises :class:`Exhausted` instead.
    """
    L.check()
    bud = Budget.of(budget, "clean_clique_or_cover")
    for S in combinations(L.vertices, n):
        bud.tick()
        if is_clean(L, S):
            return CleanClique(S)
    edges = sorted(L.labels, key=lambda p: sorted(p))
    for W in combinations(L.vertices, m2):
        bud.tick()
        Wset = set(W)
        hits = [e for e in edges if Wset <= L.labels[e]]
        if len(hits) >= m1:
            return LabelCover(tuple(hits[:m1]), W)
    return None

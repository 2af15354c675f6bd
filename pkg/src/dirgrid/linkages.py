"""Linked sets, linkages and the agree/cross searches."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

from .digraph import Digraph, DirectedPath, component_of, eulerianize, menger_paths
from .errors import Budget, DirgridError, Exhausted, InvalidInput, Report
from .havens import (
    EulerianOutcome,
    HavenCertificate,
    _intersecting_family,
    connectors,
    haven_from_intersecting_family,
    haven_order,
)


class Monotone(enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    NEITHER = "Neither"


class Relation(enum.Enum):
    AGREE = "Agree"
    CROSS = "Cross"
    NEITHER = "Neither"


@dataclass(frozen=True)
class Linkage:
    """Vertex-disjoint paths, one from each source; ``A`` and ``B`` keep their order."""

    A: tuple[int, ...]
    B: tuple[int, ...]
    paths: tuple[DirectedPath, ...]

    @classmethod
    def of(cls, paths: Iterable[DirectedPath], A: Sequence[int] | None = None, B: Sequence[int] | None = None) -> "Linkage":
        paths = tuple(paths)
        A = tuple(A) if A is not None else tuple(sorted(p.start for p in paths))
        B = tuple(B) if B is not None else tuple(sorted(p.finish for p in paths))
        return cls(A, B, paths)

    @property
    def mapping(self) -> dict[int, int]:
        return {p.start: p.finish for p in self.paths}

    def path_from(self, a: int) -> DirectedPath:
        return next(p for p in self.paths if p.start == a)

    def check(self, D: Digraph) -> Report:
        r = Report()
        for i, p in enumerate(self.paths):
            r.extend(p.check(D), f"path{i}-")
        if len(self.paths) != len(self.A) or len(set(self.A)) != len(self.A):
            r.add("count", "need exactly one path per source")
        if sorted(p.start for p in self.paths) != sorted(self.A):
            r.add("sources", "path starts do not match A")
        if sorted(p.finish for p in self.paths) != sorted(self.B) or len(set(self.B)) != len(self.B):
            r.add("targets", "path ends do not form a bijection onto B")
        for i, j in combinations(range(len(self.paths)), 2):
            if self.paths[i].vertex_set() & self.paths[j].vertex_set():
                r.add("disjoint", f"paths {i} and {j} share a vertex")
        return r


# ---------------------------------------------------------------------------
# linked sets


@dataclass(frozen=True)
class LinkedResult:
    linked: bool
    A: tuple[int, ...] = ()
    B: tuple[int, ...] = ()
    separator: frozenset[int] = frozenset()

    def __bool__(self) -> bool:
        return self.linked


def is_linked_set(D: Digraph, X: Iterable[int], budget: int | Budget | None = None) -> LinkedResult:
    """Decide linkedness; a failure carries ``(A, B, C)`` with ``|C| < |A|``.

    Pairs are tried by size, then ``A`` and ``B`` lexicographically, so the
    witness is the first failing pair in that order.
    """
    X = sorted(set(X))
    if not set(X) <= D.vertex_set:
        raise InvalidInput("X is not a subset of V(D)")
    bud = Budget.of(budget, "is_linked_set")
    for k in range(1, len(X) + 1):
        for A in combinations(X, k):
            for B in combinations(X, k):
                bud.tick()
                res = menger_paths(D, A, B, k)
                if not res.linked:
                    return LinkedResult(False, A, B, frozenset(res.separator))
    return LinkedResult(True)


HavenQuery = Callable[[frozenset], frozenset]


def _as_query(D: Digraph, haven) -> tuple[HavenQuery, int | None]:
    if isinstance(haven, HavenCertificate):
        return (lambda Z: haven.component(D, Z)), haven.order
    if callable(haven):
        return haven, None
    raise InvalidInput("haven must be a certificate or a callable")


def extract_linked_set(
    D: Digraph,
    n: int,
    haven: HavenCertificate | HavenQuery | None = None,
    budget: int | Budget | None = None,
    trace: list | None = None,
) -> frozenset[int]:
    """A linked set of size ``2n`` from a haven of order ``3n``.

    Among all ``X`` with ``|X| <= 2n`` we take the one minimising
    ``|B(X)|``, then ``|X|``, then lexicographically.  ``trace`` (if given)
    receives every improvement as ``(|B(X)|, X)``.
    """
    if n <= 0:
        raise InvalidInput("n must be positive")
    bud = Budget.of(budget, "extract_linked_set")
    if haven is None:
        w, haven = haven_order(D, 3 * n, bud)
        if w < 3 * n:
            raise InvalidInput(f"no haven of order {3 * n} (haven order is {w})")
    query, order = _as_query(D, haven)
    if order is not None and order < 3 * n:
        raise InvalidInput(f"haven has order {order} < {3 * n}")
    best = None
    for r in range(min(2 * n, len(D)) + 1):
        for X in combinations(D.vertices, r):
            bud.tick()
            key = (len(query(frozenset(X))), r, X)
            if best is None or key < best:
                best = key
                if trace is not None:
                    trace.append((key[0], frozenset(X)))
    X = frozenset(best[2])
    if len(X) != 2 * n or not is_linked_set(D, X, bud).linked:
        raise DirgridError("extremal set is not a linked 2n-set; the haven is invalid")
    return X


# ---------------------------------------------------------------------------
# monotonicity and agree/cross


def classify_monotone(L: Linkage, orderA: Sequence[int], orderB: Sequence[int]) -> Monotone:
    f = L.mapping
    if sorted(orderA) != sorted(f) or len(set(orderA)) != len(orderA):
        raise InvalidInput("orderA does not cover the sources")
    if sorted(orderB) != sorted(f.values()) or len(set(orderB)) != len(orderB):
        raise InvalidInput("orderB does not cover the targets")
    pos = {b: i for i, b in enumerate(orderB)}
    seq = [pos[f[a]] for a in orderA]
    if seq == sorted(seq):
        return Monotone.INCREASING
    if seq == sorted(seq, reverse=True):
        return Monotone.DECREASING
    return Monotone.NEITHER


def relation_of_maps(f: dict[int, int], g: dict[int, int]) -> Relation:
    """Agree/cross from the matchings alone, via the composition ``g ∘ f`` on ``A``."""
    if set(g) != set(f.values()) or set(g.values()) != set(f):
        raise InvalidInput("linkages are not over the same A and B")
    p = {a: g[f[a]] for a in f}
    if all(p[a] == a for a in p):
        return Relation.AGREE
    fixed = sum(1 for a in p if p[a] == a)
    if all(p[p[a]] == a for a in p) and fixed <= 1:
        return Relation.CROSS
    return Relation.NEITHER


def pair_relation(L1: Linkage, L2: Linkage) -> Relation:
    """Relation between a linkage ``A -> B`` and a linkage ``B -> A``.

    Singletons count as agreeing even though they cross as well.
    """
    return relation_of_maps(L1.mapping, L2.mapping)


# ---------------------------------------------------------------------------
# fixed-pair disjoint paths


def _simple_paths_avoiding(D: Digraph, a: int, b: int, blocked: frozenset, bud: Budget) -> Iterator[list[int]]:
    """Simple a->b paths (as vertex lists) avoiding ``blocked``; DFS in edge-id order."""
    if a in blocked or b in blocked:
        return
    if a == b:
        yield [a]
        return
    stack = [(a, iter(sorted(set(D.successors(a)))))]
    on = [a]
    seen = {a}
    while stack:
        v, it = stack[-1]
        w = next(it, None)
        if w is None:
            stack.pop()
            seen.discard(on.pop())
            continue
        bud.tick()
        if w in seen or w in blocked:
            continue
        if w == b:
            yield on + [b]
            continue
        on.append(w)
        seen.add(w)
        stack.append((w, iter(sorted(set(D.successors(w))))))


def linkage_for_matching(
    D: Digraph, pairs: Sequence[tuple[int, int]], budget: int | Budget | None = None, blocked: Iterable[int] = ()
) -> tuple[DirectedPath, ...] | None:
    """Disjoint paths realising the given ``(source, target)`` pairs, or ``None``."""
    bud = Budget.of(budget, "linkage_for_matching")
    terminals = {x for p in pairs for x in p}
    blocked = frozenset(blocked)

    def go(i, used):
        if i == len(pairs):
            return []
        a, b = pairs[i]
        others = frozenset(terminals - {a, b})
        for vs in _simple_paths_avoiding(D, a, b, used | others, bud):
            rest = go(i + 1, used | frozenset(vs))
            if rest is not None:
                return [DirectedPath.from_vertices(D, vs)] + rest
        return None

    found = go(0, blocked)
    return tuple(found) if found is not None else None


@dataclass(frozen=True)
class LinkagePair:
    A: tuple[int, ...]
    B: tuple[int, ...]
    forward: Linkage
    backward: Linkage
    relation: Relation

    def verify(self, D: Digraph) -> Report:
        r = Report()
        r.extend(self.forward.check(D), "forward-")
        r.extend(self.backward.check(D), "backward-")
        if r.ok and pair_relation(self.forward, self.backward) != self.relation:
            r.add("relation", f"linkages do not {self.relation.value.lower()}")
        if self.relation is Relation.NEITHER:
            r.add("relation", "pair neither agrees nor crosses")
        return r


def _check_pre(D: Digraph, X, A, B, n):
    X, A, B = set(X), tuple(sorted(set(A))), tuple(sorted(set(B)))
    if not X <= D.vertex_set or not set(A) <= X or not set(B) <= X:
        raise InvalidInput("A and B must be subsets of X inside V(D)")
    if set(A) & set(B):
        raise InvalidInput("A and B must be disjoint")
    if len(A) != len(B):
        raise InvalidInput("|A| must equal |B|")
    if not 0 < n <= len(A):
        raise InvalidInput("need 0 < n <= |A|")
    if not (menger_paths(D, A, B, len(A)).linked and menger_paths(D, B, A, len(A)).linked):
        raise InvalidInput("X is not linked: A and B are not linked both ways")
    return A, B


def linkmatch_search(D: Digraph, X, A, B, n: int, budget: int | Budget | None = 100_000) -> LinkagePair:
    """Sub-sets ``A', B'`` of size ``n`` with linkages both ways that agree or cross.

    For each ``(A', B')`` in lexicographic order, the Menger linkages are
    tried first; otherwise every realisable matching pair is enumerated.
    """
    bud = Budget.of(budget, "linkmatch_search")
    bud.tick()
    A, B = _check_pre(D, X, A, B, n)
    for A1 in combinations(A, n):
        for B1 in combinations(B, n):
            bud.tick()
            fw = menger_paths(D, A1, B1, n)
            bw = menger_paths(D, B1, A1, n)
            if not (fw.linked and bw.linked):
                continue
            L1, L2 = Linkage.of(fw.paths, A1, B1), Linkage.of(bw.paths, B1, A1)
            rel = pair_relation(L1, L2)
            if rel is not Relation.NEITHER:
                return LinkagePair(A1, B1, L1, L2, rel)
            realised = {}
            for img in permutations(B1):
                ps = linkage_for_matching(D, list(zip(A1, img)), bud)
                if ps is not None:
                    realised[img] = ps
            back = {}
            for img in permutations(A1):
                ps = linkage_for_matching(D, list(zip(B1, img)), bud)
                if ps is not None:
                    back[img] = ps
            for img, ps in realised.items():
                f = dict(zip(A1, img))
                for img2, qs in back.items():
                    rel = relation_of_maps(f, dict(zip(B1, img2)))
                    if rel is not Relation.NEITHER:
                        return LinkagePair(A1, B1, Linkage.of(ps, A1, B1), Linkage.of(qs, B1, A1), rel)
    raise Exhausted("linkmatch_search: no agreeing or crossing pair found", bud.spent)


@dataclass(frozen=True)
class AgreeingPair:
    """First outcome: agreeing linkages that meet only along matched pairs."""

    pair: LinkagePair

    def verify(self, D: Digraph) -> Report:
        r = self.pair.verify(D)
        if self.pair.relation is not Relation.AGREE:
            r.add("relation", "linkages must agree")
        f = self.pair.forward
        for p in f.paths:
            for q in self.pair.backward.paths:
                if q.start == p.finish and q.finish == p.start:
                    continue
                if p.vertex_set() & q.vertex_set():
                    r.add("disjoint", f"paths {p.start}->{p.finish} and {q.start}->{q.finish} meet")
        return r


def _split_connector(D: Digraph, H: Digraph, a: int, b: int) -> tuple[DirectedPath, DirectedPath]:
    fw = menger_paths(H, [a], [b], 1).paths[0]
    bw = menger_paths(H, [b], [a], 1).paths[0]
    return fw, bw


def linkmatch2_search(
    D: Digraph, X, A, B, n: int, budget: int | Budget | None = 100_000, per_pair: int = 2, max_len: int = 8
) -> AgreeingPair | EulerianOutcome:
    """An intersecting connector family (second outcome) or disjoint connectors (first).

    Connectors are unions of an ``a -> b`` and a ``b -> a`` path for
    ``a ∈ A, b ∈ B``; a bounded number per pair is generated.  The
    intersecting family is looked for first, because for small ``n`` the
    disjoint outcome is almost always available and would mask it.
    """
    bud = Budget.of(budget, "linkmatch2_search")
    bud.tick()
    A, B = _check_pre(D, X, A, B, n)
    tagged = []
    for a in A:
        for b in B:
            for H in connectors(D, [(a, b)], per_pair, max_len):
                tagged.append((H, a, b))
    cands = [H for H, _, _ in tagged]
    fam = _intersecting_family(cands, 2 * n + 1, bud)
    if fam is not None:
        Dp, cert = haven_from_intersecting_family(D, fam, n)
        mult = eulerianize(Dp, 4)
        if mult is not None:
            return EulerianOutcome(Dp, mult, cert, "connectors")
    chosen: list[int] = []

    def grow(i, used, ends):
        if len(chosen) == n:
            return True
        for j in range(i, len(tagged)):
            H, a, b = tagged[j]
            bud.tick()
            if a in ends or b in ends or H.vertex_set & used:
                continue
            chosen.append(j)
            if grow(j + 1, used | H.vertex_set, ends | {a, b}):
                return True
            chosen.pop()
        return False

    if grow(0, frozenset(), frozenset()):
        fws, bws = [], []
        for j in chosen:
            H, a, b = tagged[j]
            p, q = _split_connector(D, H, a, b)
            fws.append(p)
            bws.append(q)
        A1 = tuple(sorted(tagged[j][1] for j in chosen))
        B1 = tuple(sorted(tagged[j][2] for j in chosen))
        pair = LinkagePair(A1, B1, Linkage.of(fws, A1, B1), Linkage.of(bws, B1, A1), Relation.AGREE)
        return AgreeingPair(pair)
    raise Exhausted("linkmatch2_search: neither outcome found among the candidate connectors", bud.spent)

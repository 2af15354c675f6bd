"""Acyclic and bubble acyclic grids out of crossing path systems.

Every construction here only proposes a grid.  The proposal is cut down to
the union of its paths, edges shared by two paths are butterfly contracted,
and the result is handed to :func:`validate_grid_witness`; only validated
grids leave this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from ..digraph import Digraph, DirectedPath
from ..errors import Budget, Exhausted, InvalidInput, Report
from ..minors import AcyclicGridWitness, CylGridWitness, MinorModel, validate_grid_witness
from ..rerouting import RoutedSystem, contract_union, property_iii, validate_routed_system
from .decomposition import INTEGRATED, SEGREGATED, SubpathDecomposition, check_reverse, mixing_of, ordered_families


@dataclass(frozen=True)
class GridExtraction:
    """A validated grid witness living in ``host = model.replay(original)``."""

    model: MinorModel
    host: Digraph
    witness: AcyclicGridWitness | CylGridWitness
    branch: str


IDENTITY = lambda D: MinorModel((), {v: v for v in D.vertices})


# ---------------------------------------------------------------------------
# walking helpers


def advance(P: DirectedPath, start: int, targets) -> int | None:
    """Position of the first vertex of ``targets`` on ``P`` at or after position ``start``."""
    for p in range(start, len(P.vertices)):
        if P.vertices[p] in targets:
            return p
    return None


def chain(pieces: Sequence[DirectedPath]) -> DirectedPath:
    out = pieces[0]
    for P in pieces[1:]:
        out = out.concat(P)
    return out


def diagonal(hs: Sequence[DirectedPath], vs: Sequence[DirectedPath], level: int, start: int = 0) -> DirectedPath | None:
    """The usual staircase: along ``hs[level]`` to the first vertex of ``vs[0]``,
    up ``vs[0]`` to the next horizontal, along it to ``vs[1]``, and so on
    until every vertical has been used once."""
    pieces = []
    H, pos = hs[level], start
    for t, V in enumerate(vs):
        q = advance(H, pos, V.vertex_set())
        if q is None:
            return None
        pieces.append(H.subpath(pos, q))
        if level + 1 >= len(hs):
            return None
        a = V.position(H.vertices[q])
        b = advance(V, a, hs[level + 1].vertex_set())
        if b is None:
            return None
        pieces.append(V.subpath(a, b))
        level += 1
        H, pos = hs[level], hs[level].position(V.vertices[b])
    return chain(pieces)


def witness_digraph(w: AcyclicGridWitness) -> Digraph:
    """The union of the witness paths as a digraph."""
    vs, es = set(), {}
    for P in w.horizontals + w.verticals:
        vs.update(P.vertices)
        for i, e in enumerate(P.edges):
            ends = (P.vertices[i], P.vertices[i + 1])
            if es.setdefault(e, ends) != ends:
                raise InvalidInput(f"edge {e} has two different ends in the witness")
    return Digraph(sorted(vs), [(e, t, h) for e, (t, h) in sorted(es.items())])


def finish_grid(D: Digraph, hs, vs, flavor: str, branch: str) -> tuple[GridExtraction | None, Report]:
    """Contract shared edges of the proposal and validate it."""
    try:
        model, host, _, (hs2, vs2) = contract_union(D, [hs, vs])
    except InvalidInput as exc:
        r = Report()
        r.add("contract", str(exc))
        return None, r
    w = AcyclicGridWitness(len(hs2), hs2, vs2, flavor)
    r = validate_grid_witness(host, w)
    if not r.ok:
        return None, r
    return GridExtraction(model, host, w, branch), r


# ---------------------------------------------------------------------------
# the two re-routing procedures


def integrated_reroute(hs: Sequence[DirectedPath], vs: Sequence[DirectedPath], n: int) -> list[DirectedPath] | None:
    """New verticals for ``n`` consecutive horizontals and ``3n-2`` verticals
    (left to right) that are integrated on every level.

    Vertical ``r`` starts at ``f^1`` of the ``2r``-th vertical from the right
    and steps one vertical to the left on each horizontal.  Returned in the
    order the horizontals meet them.
    """
    dec = SubpathDecomposition.of(hs, vs)
    m = len(vs)
    out = []
    for r in range(n):
        i = m - 1 - 2 * r
        pieces = []
        for j in range(1, n + 1):
            ij = i - (j - 1)
            if ij < 0 or not dec.has(ij, j):
                return None
            if j > 1:
                H = hs[j - 1]
                a, b = H.position(dec.l(ij + 1, j - 1)), H.position(dec.f(ij, j))
                if a > b:
                    return None
                pieces.append(H.subpath(a, b))
            pieces.append(dec.sub(ij, j))
        try:
            out.append(chain(pieces))
        except InvalidInput:
            return None
    return out


def segregated_reroute(hs: Sequence[DirectedPath], vs: Sequence[DirectedPath], n: int) -> list[DirectedPath] | None:
    """New horizontals for ``3n-2`` horizontals (bottom to top) on which the
    ``n`` verticals (left to right) are segregated.

    Each horizontal is first cut back to end at its last ``f`` vertex; new
    horizontal ``r`` starts on horizontal ``2r-1`` and climbs one level at
    each vertical, right to left, ending on the left-most vertical.
    """
    dec = SubpathDecomposition.of(hs, vs)
    trunc = []
    for j in range(1, len(hs) + 1):
        H = hs[j - 1]
        if any(not dec.has(i, j) for i in range(len(vs))):
            return None
        end = max(H.position(dec.f(i, j)) for i in range(len(vs)))
        trunc.append(H.subpath(0, end))
    out = []
    order = list(reversed(vs))  # right to left
    for r in range(n):
        level = 2 * r
        if level + n - 1 >= len(trunc):
            return None
        pieces = []
        H, pos = trunc[level], 0
        for t, V in enumerate(order):
            q = advance(H, pos, V.vertex_set())
            if q is None:
                return None
            pieces.append(H.subpath(pos, q))
            if t == len(order) - 1:
                break
            a = V.position(H.vertices[q])
            b = advance(V, a, trunc[level + 1].vertex_set())
            if b is None:
                return None
            pieces.append(V.subpath(a, b))
            level += 1
            H, pos = trunc[level], trunc[level].position(V.vertices[b])
        try:
            out.append(chain(pieces))
        except InvalidInput:
            return None
    return out


# ---------------------------------------------------------------------------
# get_acyclic_grid


def _grid_properties(S: RoutedSystem, g: GridExtraction) -> Report:
    r = property_iii(S, g.witness.horizontals, g.witness.verticals)
    marks = S.embedding.marks
    for i, H in enumerate(g.witness.horizontals):
        if H.start not in marks.get("R", ()):
            r.add("begins-in-R", f"H{i} starts at {H.start}")
    for i, V in enumerate(g.witness.verticals):
        if V.finish not in marks.get("T", ()):
            r.add("ends-in-T", f"V{i} ends at {V.finish}")
    return r


def get_acyclic_grid(S: RoutedSystem, n: int, budget: int | Budget | None = 2_000_000) -> GridExtraction:
    """Plain acyclic grid of size ``n`` whose horizontals start in R and
    whose verticals end in T, inside the original extremes.

    Tries, in order: the input restricted to its bottom ``n`` horizontals and
    left ``n`` verticals; the integrated-case diagonal walk over every window
    of ``n`` consecutive horizontals and every ``3n-2`` verticals integrated on
    it; the segregated-case staircase over every ``n`` verticals and ``3n-2``
    horizontals on which they are segregated.
    """
    if n < 1:
        raise InvalidInput("n must be positive")
    rep = validate_routed_system(S)
    if not rep.ok or S.embedding.mode != "disk":
        raise InvalidInput(f"not a valid disk system:\n{rep}")
    hs, vs = ordered_families(S)
    check_reverse(hs, vs)
    if len(hs) < n or len(vs) < n:
        raise InvalidInput(f"insufficient families: {len(hs)} horizontals, {len(vs)} verticals for size {n}")
    bud = Budget.of(budget, "acyclic grid search")
    D = S.host

    def accept(g):
        return g is not None and _grid_properties(S, g).ok

    w = AcyclicGridWitness(n, hs[:n], tuple(reversed(vs[:n])), "plain")
    if validate_grid_witness(D, w).ok:
        g = GridExtraction(IDENTITY(D), D, w, "restriction")
        if accept(g):
            return g

    m = 3 * n - 2
    if len(vs) >= m:
        for a in range(len(hs) - n + 1):
            window = hs[a : a + n]
            dec = SubpathDecomposition.of(window, vs)
            mix = [mixing_of(dec, j) for j in range(2, n + 1)]
            for sub in combinations(range(len(vs)), m):
                bud.tick()
                if not all(mx.holds(sub, INTEGRATED) for mx in mix):
                    continue
                new_v = integrated_reroute(window, [vs[i] for i in sub], n)
                if new_v is None:
                    continue
                g, _ = finish_grid(D, window, new_v, "plain", "integrated")
                if accept(g):
                    return g
    if len(hs) >= m:
        for sub in combinations(range(len(vs)), n):
            for hsel in combinations(range(len(hs)), m):
                bud.tick()
                chosen = [hs[j] for j in hsel]
                cv = [vs[i] for i in sub]
                dec = SubpathDecomposition.of(chosen, cv)
                if not all(mixing_of(dec, j).holds(range(n), SEGREGATED) for j in range(2, m + 1)):
                    continue
                new_h = segregated_reroute(chosen, cv, n)
                if new_h is None:
                    continue
                g, _ = finish_grid(D, new_h, list(reversed(cv)), "plain", "segregated")
                if accept(g):
                    return g
    if len(hs) >= m * n and len(vs) >= m:
        raise Exhausted("acyclic grid search", bud.spent)
    raise InvalidInput(f"insufficient families: no size-{n} grid from {len(hs)} horizontals and {len(vs)} verticals")


# ---------------------------------------------------------------------------
# bubble grids


def passes(hs: Sequence[DirectedPath], q: int, P: DirectedPath) -> int:
    """How often ``P`` comes back to ``hs[q]`` after visiting a horizontal above it."""
    Q = hs[q].vertex_set()
    above = {v for H in hs[q + 1 :] for v in H.vertices}
    count, fresh = 0, True
    for v in P.vertices:
        if v in Q:
            if fresh:
                count += 1
                fresh = False
        elif v in above:
            fresh = True
    return count


def alternations(P: DirectedPath, A, B) -> list[tuple[int, int]]:
    """Greedy pairs ``(a, b)`` of positions with ``P`` on A then B, repeatedly."""
    out, want, a = [], "A", None
    for p, v in enumerate(P.vertices):
        if want == "A" and v in A:
            a, want = p, "B"
        elif want == "B" and v in B:
            out.append((a, p))
            want = "A"
    return out


def _property_p(D, hs, vs, n, bud):
    need = 3 * n - 2
    for P in vs:
        for a, b in combinations(range(len(hs)), 2):
            bud.tick()
            if b - a + 1 < n:
                continue
            pairs = alternations(P, hs[a].vertex_set(), hs[b].vertex_set())
            if len(pairs) < need:
                continue
            subs = [P.subpath(x, y) for x, y in pairs[:need]]
            Ha = hs[a]
            # further along a horizontal is further left
            subs.sort(key=lambda Q: -Ha.position(Q.start))
            window = hs[a : a + n]
            new_v = integrated_reroute(window, subs, n)
            if new_v is None:
                continue
            g, _ = finish_grid(D, window, new_v, "bubble", "property-P")
            if g is not None:
                return g, tuple(window), tuple(new_v)
    return None


def _induction(D, hs, vs, n, bud):
    for hsel in combinations(range(len(hs)), n):
        chosen = [hs[j] for j in hsel]
        top = chosen[-1].vertex_set()
        for sub in combinations(range(len(vs)), n):
            bud.tick()
            prefixes = []
            for i in sub:
                V = vs[i]
                p = advance(V, 0, top)
                if p is None:
                    break
                prefixes.append(V.subpath(0, p))
            else:
                w = AcyclicGridWitness(n, tuple(chosen), tuple(reversed(prefixes)), "bubble")
                if validate_grid_witness(D, w).ok:
                    return GridExtraction(IDENTITY(D), D, w, "induction"), w.horizontals, w.verticals
    return None


def bubble_paths(D: Digraph, hs: Sequence[DirectedPath], vs: Sequence[DirectedPath], n: int, bud: Budget):
    """Like :func:`bubble_core`, also returning the grid's paths as paths of ``D``
    (before shared edges are contracted): ``(grid, horizontals, verticals)``.

    ``vs`` is given left to right; the returned verticals are in the order the
    horizontals meet them.
    """
    found = _property_p(D, hs, vs, n, bud)
    if found is None:
        found = _induction(D, hs, vs, n, bud)
    return found


def bubble_core(D: Digraph, hs: Sequence[DirectedPath], vs: Sequence[DirectedPath], n: int, bud: Budget) -> GridExtraction | None:
    """Property P first, then the prefix/subset search of the induction."""
    found = bubble_paths(D, hs, vs, n, bud)
    return None if found is None else found[0]


def get_bubble_grid(S: RoutedSystem, n: int, budget: int | Budget | None = 2_000_000) -> GridExtraction:
    """Bubble acyclic grid of size ``n`` whose horizontals are input horizontals."""
    if n < 1:
        raise InvalidInput("n must be positive")
    rep = validate_routed_system(S)
    if not rep.ok or S.embedding.mode != "disk":
        raise InvalidInput(f"not a valid disk system:\n{rep}")
    hs, vs = ordered_families(S)
    check_reverse(hs, vs)
    if len(hs) < n:
        raise InvalidInput(f"insufficient horizontals: {len(hs)} for size {n}")
    if len(vs) < n:
        raise InvalidInput(f"insufficient verticals: {len(vs)} for size {n}")
    bud = Budget.of(budget, "bubble grid search")
    g = bubble_core(S.host, hs, vs, n, bud)
    if g is None:
        raise Exhausted("bubble grid search", bud.spent)
    return g


# ---------------------------------------------------------------------------
# de-bubbling


def debubble(w: AcyclicGridWitness, k: int) -> GridExtraction:
    """Plain grid of size ``k`` from a bubble grid with at least ``3k-1`` horizontals.

    The host of the result is a minor of the union of the witness paths.
    """
    if k < 1:
        raise InvalidInput("k must be positive")
    if len(w.horizontals) < 3 * k - 1 or len(w.verticals) < k:
        raise InvalidInput(f"size deficit: need {3 * k - 1} horizontals and {k} verticals")
    D = witness_digraph(w)
    plain = AcyclicGridWitness(k, w.horizontals[:k], w.verticals[:k], "plain")
    if validate_grid_witness(D, plain).ok:
        return GridExtraction(IDENTITY(D), D, plain, "plain")
    vs = w.verticals[:k]
    new_h = []
    for r in range(k):
        P = diagonal(w.horizontals, vs, 2 * r)
        if P is None:
            raise InvalidInput(f"horizontal {2 * r + 1} cannot start a staircase")
        new_h.append(P)
    g, rep = finish_grid(D, new_h, vs, "plain", "reroute")
    if g is None:
        raise InvalidInput(f"de-bubbled grid does not validate:\n{rep}")
    return g

"""Linking undirected cuts with directed paths, and finding nested directed circuits.

The undirected structure (many disjoint separating cycles and many
inner-to-outer paths) is an input contract; everything directed is computed
here and validated before it is returned.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from ..digraph import Digraph, DirectedPath, check_disjoint_paths, is_eulerian, max_disjoint_paths, menger_paths
from ..embedding import RotationEmbedding, dual_path, winding
from ..errors import Budget, InvalidInput, Report
from ..minors import CylGridWitness
from .config import PipelineConfig

MAX_OUT_DEGREE = 6


def undirected_view(D: Digraph) -> Digraph:
    """Both orientations of every non-loop edge, one arc per ordered pair."""
    pairs = set()
    for t, h in D.edges.values():
        if t != h:
            pairs.add((t, h))
            pairs.add((h, t))
    return Digraph.from_arcs(sorted(pairs), D.vertices)


def check_degree_bound(D: Digraph, bound: int = MAX_OUT_DEGREE) -> None:
    big = [v for v in D.vertices if D.out_degree(v) > bound]
    if big:
        raise InvalidInput(f"degree bound violated: out-degree {D.out_degree(big[0])} > {bound} at vertex {big[0]}")


# ---------------------------------------------------------------------------
# link_cuts


@dataclass(frozen=True)
class LinkCutsResult:
    """Either ``paths`` or a cut certifying that a hypothesis failed.

    ``undirected_cut`` is set when the two cuts are joined by fewer than
    ``7n`` disjoint undirected paths; ``directed_cut`` is the Menger
    separator when the directed linkage fails anyway (which only happens
    when the non-crossing hypothesis, not checked here, is violated).
    """

    n: int
    paths: tuple[DirectedPath, ...] | None = None
    undirected_cut: frozenset[int] | None = None
    directed_cut: frozenset[int] | None = None

    @property
    def linked(self) -> bool:
        return self.paths is not None


def link_cuts(D: Digraph, C1: Iterable[int], C2: Iterable[int], n: int) -> LinkCutsResult:
    """``n`` disjoint directed C1->C2 paths in an eulerian digraph of out-degree <= 6."""
    if n < 1:
        raise InvalidInput("n must be positive")
    C1, C2 = frozenset(C1), frozenset(C2)
    if not (C1 <= D.vertex_set and C2 <= D.vertex_set):
        raise InvalidInput("cuts must be vertex subsets of D")
    check_degree_bound(D)
    if not is_eulerian(D):
        raise InvalidInput("digraph is not eulerian")
    need = 7 * n
    if len(C1) != need or len(C2) != need:
        raise InvalidInput(f"cuts must have exactly {need} vertices, got {len(C1)} and {len(C2)}")
    if C1 & C2:
        raise InvalidInput("cuts must be disjoint")
    und, sep = max_disjoint_paths(undirected_view(D), C1, C2, limit=need)
    if len(und) < need:
        return LinkCutsResult(n, undirected_cut=sep)
    res = menger_paths(D, C1, C2, n)
    if res.linked:
        assert check_disjoint_paths(D, C1, C2, res.paths).ok
        return LinkCutsResult(n, paths=res.paths)
    return LinkCutsResult(n, directed_cut=res.separator)


# ---------------------------------------------------------------------------
# sides of closed curves on the cylinder


def cycle_edges(D: Digraph, cycle: Sequence[int], directed: bool = False) -> list[int] | None:
    """Edge ids along a cyclic vertex sequence (no repeated first vertex).

    Undirected mode takes an edge in either direction, never the same edge
    twice; ``None`` when some step has no usable edge.
    """
    out: list[int] = []
    k = len(cycle)
    for i in range(k):
        u, v = cycle[i], cycle[(i + 1) % k]
        cands = list(D.edges_between(u, v))
        if not directed:
            cands += D.edges_between(v, u)
        cands = sorted(e for e in set(cands) if e not in out)
        if not cands:
            return None
        out.append(cands[0])
    return out


def inside_vertices(E: RotationEmbedding, edges: Iterable[int]) -> frozenset[int]:
    """Vertices off the curve that lie on the hole side of the closed curve ``edges``."""
    cut = set(edges)
    on = {x for e in cut for x in E.host.edges[e]}
    start = E.hole_face()
    if start is None:
        raise InvalidInput("needs a cylinder embedding")
    seen = {start}
    todo = [start]
    while todo:
        f = todo.pop()
        for d in E.faces()[f]:
            if d[0] in cut:
                continue
            g = E.face_of(E.twin(d))
            if g not in seen:
                seen.add(g)
                todo.append(g)
    return frozenset(v for f in seen for v in E.face_vertices(f) if v not in on)


# ---------------------------------------------------------------------------
# the undirected input contract


@dataclass(frozen=True)
class UndirectedWitness:
    """Disjoint separating undirected cycles (innermost first) and disjoint
    undirected paths from the innermost to the outermost cycle.

    Cycles are vertex sequences without the closing repeat.
    """

    circuits: tuple[tuple[int, ...], ...]
    paths: tuple[tuple[int, ...], ...]


def cylinder_witness(W: CylGridWitness) -> UndirectedWitness:
    """The rings and the columns of a generated cylindrical grid."""
    rings = tuple(C.vertices[:-1] for C in W.circuits)
    cols = tuple(tuple(W.vertex(i, j) for i in range(1, W.n + 1)) for j in range(1, 2 * W.n + 1))
    return UndirectedWitness(rings, cols)


def validate_undirected_witness(E: RotationEmbedding, W: UndirectedWitness) -> Report:
    D = E.host
    rep = Report()
    if not W.circuits:
        rep.add("circuits", "no cycles")
        return rep
    edge_sets = []
    for k, cyc in enumerate(W.circuits):
        if len(set(cyc)) != len(cyc) or len(cyc) < 2 or not set(cyc) <= D.vertex_set:
            rep.add("cycle", f"cycle {k} is not a simple vertex cycle of D")
            return rep
        es = cycle_edges(D, cyc)
        if es is None:
            rep.add("cycle", f"cycle {k} uses a missing edge")
            return rep
        if winding(E, es) % 2 == 0:
            rep.add("separates", f"cycle {k} does not separate hole and outer face")
        edge_sets.append(es)
    for a, b in combinations(range(len(W.circuits)), 2):
        if set(W.circuits[a]) & set(W.circuits[b]):
            rep.add("disjoint", f"cycles {a} and {b} meet")
    if not rep.ok:
        return rep
    for k in range(len(W.circuits) - 1):
        if not set(W.circuits[k]) <= inside_vertices(E, edge_sets[k + 1]):
            rep.add("nested", f"cycle {k} is not inside cycle {k + 1}")
    inner, outer = set(W.circuits[0]), set(W.circuits[-1])
    used: set[int] = set()
    for k, P in enumerate(W.paths):
        if not P or len(set(P)) != len(P) or any(not (D.edges_between(u, v) or D.edges_between(v, u)) for u, v in zip(P, P[1:])):
            rep.add("path", f"path {k} is not a simple undirected path of D")
            continue
        if P[0] not in inner or P[-1] not in outer:
            rep.add("path-ends", f"path {k} does not run from the innermost to the outermost cycle")
        if used & set(P):
            rep.add("path-disjoint", f"path {k} meets an earlier path")
        used |= set(P)
    return rep


# ---------------------------------------------------------------------------
# extremal cuts


def _ball_layers(U: Digraph, s: int, avoid: frozenset[int]):
    """Growing BFS balls around ``s`` in ``U`` that stay off ``avoid``."""
    ball = {s}
    frontier = [s]
    while frontier:
        yield frozenset(ball)
        nxt = []
        for v in frontier:
            for w in U.successors(v):
                if w not in ball and w not in avoid:
                    ball.add(w)
                    nxt.append(w)
        frontier = nxt


def side_of(U: Digraph, S: frozenset[int], s: int) -> frozenset[int]:
    return frozenset(U.reachable({s}, forbidden=S))


def extremal_cut(U: Digraph, s: int, far: frozenset[int], order: int, bud: Budget) -> tuple[frozenset[int], frozenset[int]] | None:
    """A vertex cut of order <= ``order`` keeping ``s`` off the cut and ``far``
    off the ``s`` side, with the ``s`` side as large as possible among the
    cuts closest to ``far`` that separate a BFS ball around ``s``.

    Returns ``(cut, s_side)``.
    """
    best = None
    for ball in _ball_layers(U, s, far):
        bud.tick(len(U))
        rim = {w for v in ball for w in U.successors(v)} - ball
        if not rim or rim & far:
            break
        paths, sep = max_disjoint_paths(U, far, rim, limit=order + 1)
        if len(paths) > order:
            break
        if s in sep:
            continue
        side = side_of(U, sep, s)
        if side & far:
            continue
        key = (len(side), -len(sep))
        if best is None or key > best[0]:
            best = (key, sep, side)
    return None if best is None else (best[1], best[2])


# ---------------------------------------------------------------------------
# separating directed circuits by peeling


def crossing_signs(E: RotationEmbedding) -> dict[int, int]:
    """Signed contribution of each edge to :func:`winding`."""
    sign: dict[int, int] = {}
    for d in dual_path(E):
        sign[d[0]] = sign.get(d[0], 0) + (-1 if d[1] else 1)
    return {e: s for e, s in sign.items() if s}


def _simple_part(D: Digraph, walk: list[int], sign: dict[int, int], sigma: int) -> list[int] | None:
    """A simple cycle of winding ``sigma`` inside the closed walk ``walk``."""
    stack: list[int] = []
    pos: dict[int, int] = {}
    for e in walk:
        t = D.tail(e)
        if t in pos:
            k = pos[t]
            cyc = stack[k:]
            del stack[k:]
            for f in cyc:
                pos.pop(D.tail(f), None)
            if sum(sign.get(f, 0) for f in cyc) == sigma:
                return cyc
        pos[t] = len(stack)
        stack.append(e)
    if stack and sum(sign.get(f, 0) for f in stack) == sigma:
        return stack
    return None


def shortest_winding_circuit(D: Digraph, allowed: frozenset[int], sign: dict[int, int], sigma: int, bud: Budget, reach: int = 3) -> list[int] | None:
    """Shortest directed circuit inside ``allowed`` winding ``sigma`` times around the hole.

    Any such circuit uses an edge with non-zero sign, so searches start from
    those edges only; states are ``(vertex, running winding)``.
    """
    best = None
    for e0 in sorted(sign):
        t0, h0 = D.edges[e0]
        if t0 not in allowed or h0 not in allowed:
            continue
        start = (h0, sign[e0])
        goal = (t0, sigma)
        prev = {start: None}
        queue = deque([start])
        while queue and goal not in prev:
            v, w = state = queue.popleft()
            bud.tick()
            for e in D.out_edges(v):
                x = D.head(e)
                if x not in allowed or e == e0:
                    continue
                nw = w + sign.get(e, 0)
                if abs(nw) > reach:
                    continue
                nxt = (x, nw)
                if nxt not in prev:
                    prev[nxt] = (state, e)
                    queue.append(nxt)
        if goal not in prev:
            continue
        walk = []
        cur = goal
        while prev[cur] is not None:
            cur, e = prev[cur]
            walk.append(e)
        walk = [e0] + walk[::-1]
        cyc = _simple_part(D, walk, sign, sigma)
        if cyc is not None and (best is None or len(cyc) < len(best)):
            best = cyc
    return best


def _circuit_path(D: Digraph, cyc: list[int]) -> DirectedPath:
    # rotate to start at the least vertex so outputs are canonical
    k = min(range(len(cyc)), key=lambda i: D.tail(cyc[i]))
    es = cyc[k:] + cyc[:k]
    return DirectedPath(tuple(D.tail(e) for e in es) + (D.tail(es[0]),), tuple(es))


def peel_circuits(E: RotationEmbedding, allowed: frozenset[int], sigma: int, bud: Budget, keep=None) -> list[DirectedPath]:
    """Greedily peel shortest disjoint circuits of winding ``sigma`` out of ``allowed``."""
    D = E.host
    sign = crossing_signs(E)
    left = set(allowed)
    out = []
    while True:
        cyc = shortest_winding_circuit(D, frozenset(left), sign, sigma, bud)
        if cyc is None:
            return out
        C = _circuit_path(D, cyc)
        left -= C.vertex_set()
        if keep is None or keep(C):
            out.append(C)


# ---------------------------------------------------------------------------
# find_circuits_and_paths


class CountingInconclusive(InvalidInput):
    """Neither orientation yields enough separating circuits.

    ``curve`` lists the edges crossed by the hole-to-outer curve used to
    measure winding, with their crossing signs.
    """

    def __init__(self, counts: dict[int, int], need: int, curve: list[tuple[int, int]]):
        self.counts = counts
        self.need = need
        self.curve = curve
        super().__init__(
            f"counting argument inconclusive: {counts.get(1, 0)} ccw and {counts.get(-1, 0)} cw circuits, "
            f"need {need}; curve crosses {curve}"
        )


@dataclass(frozen=True)
class CircuitsAndPaths:
    circuits: tuple[DirectedPath, ...]  # innermost first
    in_paths: tuple[DirectedPath, ...]  # outermost -> innermost
    out_paths: tuple[DirectedPath, ...]  # innermost -> outermost
    orientation: int  # +1 ccw, -1 cw
    cuts: tuple[frozenset[int], frozenset[int]]
    linking: str


def _trim(P: DirectedPath, first: frozenset[int], last: frozenset[int]) -> DirectedPath | None:
    b = next((k for k, v in enumerate(P.vertices) if v in last), None)
    if b is None:
        return None
    a = max((k for k in range(b + 1) if P.vertices[k] in first), default=None)
    if a is None:
        return None
    return P.subpath(a, b)


def _nest_order(E: RotationEmbedding, circuits: Sequence[DirectedPath]) -> list[int]:
    inside = [len(inside_vertices(E, C.edges)) for C in circuits]
    return sorted(range(len(circuits)), key=lambda k: (inside[k], k))


def validate_circuits_and_paths(E: RotationEmbedding, out: CircuitsAndPaths, n: int | None = None) -> Report:
    D = E.host
    rep = Report()
    Cs = out.circuits
    if n is not None and (len(Cs) != n or len(out.in_paths) != n or len(out.out_paths) != n):
        rep.add("count", f"expected {n} circuits and {n} paths per family")
    for k, C in enumerate(Cs):
        rep.extend(C.check(D), f"C{k}-")
        if not C.is_circuit:
            rep.add("circuit", f"C{k} is not closed")
        elif winding(E, C.edges) != out.orientation:
            rep.add("orientation", f"C{k} winds {winding(E, C.edges)}")
    if not rep.ok:
        return rep
    for a, b in combinations(range(len(Cs)), 2):
        if Cs[a].vertex_set() & Cs[b].vertex_set():
            rep.add("disjoint", f"C{a} and C{b} meet")
    for k in range(len(Cs) - 1):
        if not Cs[k].vertex_set() <= inside_vertices(E, Cs[k + 1].edges):
            rep.add("nested", f"C{k} is not inside C{k + 1}")
    if not Cs:
        return rep
    inner, outer = Cs[0].vertex_set(), Cs[-1].vertex_set()
    for name, fam, a, b in (("in", out.in_paths, outer, inner), ("out", out.out_paths, inner, outer)):
        rep.extend(check_disjoint_paths(D, a, b, fam), f"{name}-")
    return rep


def find_circuits_and_paths(
    E: RotationEmbedding,
    W: UndirectedWitness,
    cfg: PipelineConfig | None = None,
    n: int = 1,
    budget: int | Budget | None = None,
) -> CircuitsAndPaths:
    """``n`` nested same-oriented directed circuits plus ``n`` in- and ``n`` out-paths."""
    cfg = cfg or PipelineConfig()
    if n < 1:
        raise InvalidInput("n must be positive")
    if E.mode != "cylinder":
        raise InvalidInput("needs a cylinder embedding")
    bud = Budget.of(budget if budget is not None else cfg.search_budget, "find_circuits_and_paths")
    D = E.host
    rep = validate_undirected_witness(E, W)
    if not rep.ok:
        raise InvalidInput(f"undirected witness invalid: {rep.violations[0]}")
    M = len(W.circuits)
    if M < cfg.required("circuits_required", n) or len(W.paths) < cfg.required("paths_required", n):
        raise InvalidInput(
            f"witness too small: {M} cycles and {len(W.paths)} paths, need "
            f"{cfg.required('circuits_required', n)} and {cfg.required('paths_required', n)}"
        )
    order = cfg.required("cut_order", n)
    b = min(cfg.required("big_side", n), M)
    U = undirected_view(D)
    s_i, s_o = min(W.circuits[0]), min(W.circuits[-1])
    far_i = frozenset(v for cyc in W.circuits[M - b:] for v in cyc)
    far_o = frozenset(v for cyc in W.circuits[:b] for v in cyc)
    found_i = extremal_cut(U, s_i, far_i, order, bud)
    found_o = extremal_cut(U, s_o, far_o, order, bud)
    if found_i is None or found_o is None:
        raise InvalidInput(f"no undirected cut of order <= {order} around the innermost/outermost cycle")
    (S_i, side_i), (S_o, side_o) = found_i, found_o
    if (S_i | side_i) & (S_o | side_o):
        raise InvalidInput("the extremal cuts overlap; witness too small for this configuration")

    # link the cuts both ways
    eulerian = is_eulerian(D) and all(D.out_degree(v) <= MAX_OUT_DEGREE for v in D.vertices)
    linking = "link_cuts" if eulerian and len(S_i) == len(S_o) == 7 * n else "menger"
    fams = []
    for A, B in ((S_i, S_o), (S_o, S_i)):
        if linking == "link_cuts":
            res = link_cuts(D, A, B, n)
            if not res.linked:
                raise InvalidInput(f"cuts cannot be linked: {res}")
            fams.append(res.paths)
        else:
            res = menger_paths(D, A, B, n)
            if not res.linked:
                raise InvalidInput(f"cuts are separated by {sorted(res.separator)}")
            fams.append(res.paths)
    outs, ins = fams

    # the circuits live in what is left between the two cuts
    between = frozenset(D.vertices) - S_i - S_o - side_i - side_o

    def separates_cuts(C):
        inside = inside_vertices(E, C.edges)
        return (S_i | side_i) <= inside and not (S_o | side_o) & inside

    need = cfg.required("circuit_count", n)
    found = {}
    for sigma in (1, -1):
        found[sigma] = peel_circuits(E, between, sigma, bud, keep=separates_cuts)
        if len(found[sigma]) >= need:
            break
    sigma = max((1, -1), key=lambda s: (len(found.get(s, ())) >= need, s))
    if len(found.get(sigma, ())) < need:
        curve = sorted(crossing_signs(E).items())
        raise CountingInconclusive({s: len(c) for s, c in found.items()}, need, curve)
    circuits = found[sigma]
    circuits = [circuits[k] for k in _nest_order(E, circuits)][:n]
    inner, outer = circuits[0].vertex_set(), circuits[-1].vertex_set()
    out_paths = tuple(_trim(P, inner, outer) for P in outs)
    in_paths = tuple(_trim(P, outer, inner) for P in ins)
    if any(P is None for P in out_paths + in_paths):
        raise InvalidInput("a linking path misses the chosen circuits")
    result = CircuitsAndPaths(tuple(circuits), in_paths, out_paths, sigma, (S_i, S_o), linking)
    rep = validate_circuits_and_paths(E, result, n)
    if not rep.ok:  # pragma: no cover - construction guarantees these
        raise AssertionError(f"invalid circuits and paths: {rep.violations}")
    return result

"""Butterfly minors, exhaustive minor search, and grid generators/validators."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph, DirectedPath
from .embedding import RotationEmbedding
from .errors import Budget, InvalidInput, Report


class NotContractible(InvalidInput):
    """Neither the tail's out-degree nor the head's in-degree is 1."""


class LoopEdge(InvalidInput):
    """Loops cannot be contracted."""


def is_butterfly_contractible(D: Digraph, e: int) -> bool:
    t, h = D.edges[e]
    return t != h and (D.out_degree(t) == 1 or D.in_degree(h) == 1)


def butterfly_contract(D: Digraph, e: int) -> Digraph:
    """Merge the ends of ``e`` into its tail.

    Parallel edges survive; edges between the two ends other than ``e`` would
    become loops and are deleted.
    """
    if e not in D.edges:
        raise InvalidInput(f"no edge {e}")
    t, h = D.edges[e]
    if t == h:
        raise LoopEdge(f"edge {e} is a loop")
    if not is_butterfly_contractible(D, e):
        raise NotContractible(f"edge {e} is neither the only out-edge of {t} nor the only in-edge of {h}")
    edges = []
    for f, (a, b) in D.edges.items():
        if f == e or {a, b} == {t, h}:
            continue
        edges.append((f, t if a == h else a, t if b == h else b))
    return Digraph([v for v in D.vertices if v != h], edges)


# ---------------------------------------------------------------------------
# minor models

Step = tuple[str, int]  # ("del_v" | "del_e" | "contract", id)


def apply_step(D: Digraph, step: Step) -> Digraph:
    op, x = step
    if op == "del_v":
        if x not in D:
            raise InvalidInput(f"no vertex {x}")
        return D.delete_vertices([x])
    if op == "del_e":
        if x not in D.edges:
            raise InvalidInput(f"no edge {x}")
        return D.delete_edges([x])
    if op == "contract":
        return butterfly_contract(D, x)
    raise InvalidInput(f"unknown step {op!r}")


def edge_multiset(D: Digraph, vmap: Mapping[int, int] | None = None) -> Counter:
    m = vmap or {v: v for v in D.vertices}
    return Counter((m[t], m[h]) for t, h in D.edges.values())


@dataclass(frozen=True)
class MinorModel:
    script: tuple[Step, ...]
    vertex_map: Mapping[int, int]

    def replay(self, host: Digraph) -> Digraph:
        D = host
        for step in self.script:
            D = apply_step(D, step)
        return D

    def verify(self, host: Digraph, pattern: Digraph) -> Report:
        r = Report()
        try:
            D = self.replay(host)
        except InvalidInput as exc:
            r.add("script", str(exc))
            return r
        if set(self.vertex_map) != D.vertex_set:
            r.add("map-domain", "vertex map does not cover exactly the surviving vertices")
            return r
        if sorted(self.vertex_map.values()) != list(pattern.vertices):
            r.add("map-bijection", "vertex map is not a bijection onto the pattern vertices")
            return r
        if edge_multiset(D, self.vertex_map) != edge_multiset(pattern):
            r.add("isomorphism", "edges do not match the pattern under the vertex map")
        return r


class _BlockSolver:
    """Can a weakly connected vertex set be contracted to one vertex?

    Any complete contraction sequence has a last edge ``a -> b``; it splits
    the set into the part merged into ``a`` and the part merged into ``b``,
    each contracted independently beforehand with that edge counted as
    external.  The last contraction is legal iff the ``a`` side has no other
    out-edge or the ``b`` side no other in-edge.  Only *which* vertices carry
    external out/in edges matters, so states are ``(set, outs, ins)``.
    """

    def __init__(self, host: Digraph, bud: Budget):
        self.host = host
        self.bud = bud
        self.memo: dict[tuple, tuple[int, ...] | None] = {}

    def _connected(self, G: frozenset) -> bool:
        start = next(iter(G))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for e in self.host.out_edges(v) + self.host.in_edges(v):
                t, h = self.host.edges[e]
                w = h if t == v else t
                if w in G and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(G)

    def solve(self, G: frozenset, outs: frozenset, ins: frozenset) -> tuple[int, ...] | None:
        if len(G) == 1:
            return ()
        key = (G, outs, ins)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None
        self.bud.tick()
        host = self.host
        inner = sorted(e for e, (t, h) in host.edges.items() if t in G and h in G and t != h)
        rest = sorted(G)
        found = None
        for e in inner:
            a, b = host.edges[e]
            others = [v for v in rest if v not in (a, b)]
            for mask in range(1 << len(others)):
                Ga = frozenset([a] + [v for i, v in enumerate(others) if mask >> i & 1])
                Gb = G - Ga
                if outs & Ga and ins & Gb:
                    continue
                if not (self._connected(Ga) and self._connected(Gb)):
                    continue
                left = self.solve(Ga, (outs & Ga) | {a}, ins & Ga)
                if left is None:
                    continue
                right = self.solve(Gb, outs & Gb, (ins & Gb) | {b})
                if right is None:
                    continue
                found = left + right + (e,)
                break
            if found is not None:
                break
        self.memo[key] = found
        return found


def find_butterfly_minor(host: Digraph, pattern: Digraph, budget: int | Budget | None = 200_000) -> MinorModel | None:
    """Exhaustive butterfly-minor search.

    Deletions commute to the front of any script (they never make an edge
    less contractible), so a model is a subdigraph made of one spanning tree
    per branch set plus one host edge per pattern edge, whose trees can be
    contracted in some order.  Branch-set assignments are enumerated with
    "unused" tried first, then representative edges; each branch set is
    decided by :class:`_BlockSolver`.
    ``None`` means the space was exhausted; running out of budget raises
    :class:`Exhausted`.
    """
    bud = Budget.of(budget, "find_butterfly_minor")
    pv = list(pattern.vertices)
    hv = list(host.vertices)
    k = len(pv)
    if k > len(hv):
        return None
    pat_edges = Counter((t, h) for t, h in pattern.edges.values())
    assign: dict[int, int | None] = {}
    size = Counter()

    solver = _BlockSolver(host, bud)

    def block_order(block: frozenset, rep_edges):
        outs = frozenset(host.tail(e) for e in rep_edges if host.tail(e) in block and host.head(e) not in block)
        ins = frozenset(host.head(e) for e in rep_edges if host.head(e) in block and host.tail(e) not in block)
        return solver.solve(block, outs, ins)

    def finish():
        blocks = {x: frozenset(v for v in hv if assign[v] == x) for x in pv}
        where = {v: assign[v] for v in hv}
        for x, b in blocks.items():
            if not host.induced(b).is_weakly_connected():
                return None
        # representatives for each pattern edge class
        options = []
        for (x, y), mult in sorted(pat_edges.items()):
            cands = sorted(e for e, (t, h) in host.edges.items() if where[t] == x and where[h] == y and (x != y or t == h))
            if len(cands) < mult:
                return None
            options.append(list(combinations(cands, mult)))
        seen = set()
        for reps in product(*options):
            rep_edges = [e for grp in reps for e in grp]
            profile = tuple(sorted(host.edges[e] for e in rep_edges))
            if profile in seen:
                continue
            seen.add(profile)
            bud.tick()
            orders = []
            for x in pv:
                order = block_order(blocks[x], rep_edges)
                if order is None:
                    break
                orders.append(order)
            else:
                keep = set(rep_edges) | {e for o in orders for e in o}
                used = {v for v in hv if where[v] is not None}
                script = [("del_v", v) for v in hv if v not in used]
                script += [("del_e", e) for e in sorted(host.edges) if e not in keep and host.tail(e) in used and host.head(e) in used]
                for order in orders:
                    script += [("contract", e) for e in order]
                model = _finish_model(host, tuple(script), blocks)
                if model.verify(host, pattern).ok:
                    return model
        return None

    def go(i):
        if i == len(hv):
            return finish() if all(size[x] for x in pv) else None
        empty = sum(1 for x in pv if not size[x])
        v = hv[i]
        choices = ([None] if len(hv) - i > empty else []) + pv
        for x in choices:
            bud.tick()
            assign[v] = x
            size[x] += 1
            got = go(i + 1)
            size[x] -= 1
            if got is not None:
                return got
        del assign[v]
        return None

    return go(0)


def _finish_model(host: Digraph, script: tuple[Step, ...], blocks: Mapping[int, Sequence[int]]) -> MinorModel:
    D = host
    for s in script:
        D = apply_step(D, s)
    vmap = {}
    for x, b in blocks.items():
        for v in b:
            if v in D:
                vmap[v] = x
    return MinorModel(script, vmap)


# ---------------------------------------------------------------------------
# grid witnesses


@dataclass(frozen=True)
class CylGridWitness:
    n: int
    circuits: tuple[DirectedPath, ...]
    spokes: Mapping[tuple[int, int], int]

    def vertex(self, i: int, j: int) -> int:
        """Vertex ``j`` (1-based) of circuit ``C_i`` (1-based)."""
        return self.circuits[i - 1].vertices[j - 1]


def validate_grid_witness(D: Digraph, w) -> Report:
    if isinstance(w, CylGridWitness):
        return _validate_cyl(D, w)
    if isinstance(w, AcyclicGridWitness):
        return _validate_acyclic(D, w)
    raise InvalidInput(f"unknown witness type {type(w).__name__}")


def _validate_cyl(D: Digraph, w: CylGridWitness) -> Report:
    r = Report()
    n = w.n
    if len(w.circuits) != n:
        r.add("count", f"{len(w.circuits)} circuits for size {n}")
        return r
    for i, C in enumerate(w.circuits, 1):
        r.extend(C.check(D), f"C{i}-")
        if not C.is_circuit or len(C.edges) != 2 * n:
            r.add("circuit", f"C{i} is not a directed circuit of length {2 * n}")
    if not r.ok:
        return r
    for a, b in combinations(range(n), 2):
        if w.circuits[a].vertex_set() & w.circuits[b].vertex_set():
            r.add("disjoint", f"C{a + 1} and C{b + 1} share a vertex")
    for i in range(1, n):
        for j in range(1, 2 * n + 1):
            e = w.spokes.get((i, j))
            if e is None or e not in D.edges:
                r.add("spoke-missing", f"no spoke for ({i},{j})")
                continue
            inner, outer = w.vertex(i, j), w.vertex(i + 1, j)
            want = (inner, outer) if j <= n else (outer, inner)
            got = D.edges[e]
            if got == want:
                continue
            if got == want[::-1]:
                r.add("spoke-direction", f"spoke ({i},{j}) points the wrong way")
            else:
                r.add("spoke-ends", f"spoke ({i},{j}) does not join vertex {j} of C{i} and C{i + 1}")
    extra = set(w.spokes) - {(i, j) for i in range(1, n) for j in range(1, 2 * n + 1)}
    if extra:
        r.add("spoke-extra", f"unexpected spokes {sorted(extra)}")
    return r


def generate_cylindrical_grid(n: int) -> tuple[Digraph, CylGridWitness, RotationEmbedding]:
    """Cylindrical grid of size ``n`` with its annular embedding.

    Vertex ``j`` of ``C_i`` gets id ``(i-1)*2n + (j-1)``; ``C_1`` is innermost
    and every circuit runs counter-clockwise.
    """
    if n < 1:
        raise InvalidInput("n must be positive")
    m = 2 * n
    vid = lambda i, j: (i - 1) * m + (j - 1)
    edges = []
    circ_edge = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            e = len(edges)
            circ_edge[(i, j)] = e
            edges.append((e, vid(i, j), vid(i, j % m + 1)))
    spokes = {}
    for i in range(1, n):
        for j in range(1, m + 1):
            e = len(edges)
            spokes[(i, j)] = e
            if j <= n:
                edges.append((e, vid(i, j), vid(i + 1, j)))
            else:
                edges.append((e, vid(i + 1, j), vid(i, j)))
    D = Digraph(range(n * m), edges)
    circuits = []
    for i in range(1, n + 1):
        vs = tuple(vid(i, j) for j in range(1, m + 1)) + (vid(i, 1),)
        es = tuple(circ_edge[(i, j)] for j in range(1, m + 1))
        circuits.append(DirectedPath(vs, es))
    rot = {}
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            # ccw from the outward direction: out-spoke, next, in-spoke, previous
            r = []
            if i < n:
                r.append(spokes[(i, j)])
            r.append(circ_edge[(i, j)])
            if i > 1:
                r.append(spokes[(i - 1, j)])
            r.append(circ_edge[(i, (j - 2) % m + 1)])
            rot[vid(i, j)] = tuple(r)
    # the right of a ccw circuit is its outside
    emb = RotationEmbedding(D, rot, "cylinder", {}, outer=(circ_edge[(n, 1)], True), hole=(circ_edge[(1, 1)], False))
    return D, CylGridWitness(n, tuple(circuits), spokes), emb


@dataclass(frozen=True)
class AcyclicGridWitness:
    """Horizontals and verticals, each list in the order the other family meets it."""

    n: int
    horizontals: tuple[DirectedPath, ...]
    verticals: tuple[DirectedPath, ...]
    flavor: str = "plain"


def hits_in_reverse(P1: DirectedPath, P2: DirectedPath) -> bool:
    """No two shared vertices appear in the same order on both paths."""
    shared = P1.vertex_set() & P2.vertex_set()
    pos1 = {v: i for i, v in enumerate(P1.vertices)}
    pos2 = {v: i for i, v in enumerate(P2.vertices)}
    for a, b in combinations(shared, 2):
        if (pos1[a] - pos1[b]) * (pos2[a] - pos2[b]) > 0:
            return False
    return True


def _validate_acyclic(D: Digraph, w: AcyclicGridWitness) -> Report:
    r = Report()
    n = w.n
    if w.flavor not in ("plain", "bubble"):
        r.add("flavor", f"unknown flavor {w.flavor!r}")
        return r
    if len(w.horizontals) != n or len(w.verticals) != n:
        r.add("count", f"need {n} horizontals and {n} verticals")
        return r
    for name, fam in (("H", w.horizontals), ("V", w.verticals)):
        for i, P in enumerate(fam, 1):
            r.extend(P.check(D), f"{name}{i}-")
            if P.is_circuit:
                r.add("path", f"{name}{i} is a circuit")
        for a, b in combinations(range(n), 2):
            if fam[a].vertex_set() & fam[b].vertex_set():
                r.add("disjoint", f"{name}{a + 1} and {name}{b + 1} share a vertex")
    if not r.ok:
        return r
    hidx = {v: j for j, H in enumerate(w.horizontals) for v in H.vertices}
    vidx = {v: i for i, V in enumerate(w.verticals) for v in V.vertices}
    for i, V in enumerate(w.verticals, 1):
        seq = [hidx[v] for v in V.vertices if v in hidx]
        if w.flavor == "plain":
            for j, H in enumerate(w.horizontals, 1):
                c = len(V.vertex_set() & H.vertex_set())
                if c != 1:
                    r.add("exactly-one-vertex", f"V{i} and H{j} share {c} vertices")
            if seq != list(range(n)):
                r.add("vertical-order", f"V{i} does not meet the horizontals in order")
        else:
            if sorted(set(seq)) != list(range(n)):
                r.add("hits-all", f"V{i} misses a horizontal")
            if seq != sorted(seq):
                r.add("monotone", f"V{i} returns to an earlier horizontal")
            for j, H in enumerate(w.horizontals, 1):
                if not hits_in_reverse(H, V):
                    r.add("reverse", f"H{j} and V{i} do not hit in reverse")
    if w.flavor == "plain":
        for j, H in enumerate(w.horizontals, 1):
            seq = [vidx[v] for v in H.vertices if v in vidx]
            if seq != list(range(n)) and r.ok:
                r.add("horizontal-order", f"H{j} does not meet the verticals in order")
    return r


def generate_acyclic_grid(n: int) -> tuple[Digraph, AcyclicGridWitness]:
    """Plain acyclic grid of size ``n``: horizontal ``j`` runs through the crossings
    ``(j, n), ..., (j, 1)``; vertical ``i`` through ``(1, i), ..., (n, i)``."""
    if n < 1:
        raise InvalidInput("n must be positive")
    vid = lambda j, i: (j - 1) * n + (i - 1)
    arcs = []
    for j in range(1, n + 1):
        arcs += [(vid(j, i), vid(j, i - 1)) for i in range(n, 1, -1)]
    for i in range(1, n + 1):
        arcs += [(vid(j, i), vid(j + 1, i)) for j in range(1, n)]
    D = Digraph.from_arcs(arcs, range(n * n))
    H = tuple(DirectedPath.from_vertices(D, [vid(j, i) for i in range(n, 0, -1)]) for j in range(1, n + 1))
    V = tuple(DirectedPath.from_vertices(D, [vid(j, i) for j in range(1, n + 1)]) for i in range(n, 0, -1))
    return D, AcyclicGridWitness(n, H, V, "plain")

"""Finite multidigraphs, directed paths, strong components, Menger linkages
and k-eulerianizability.

Everything here is immutable: operations return new values.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import count
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ._flow import INF, FlowNetwork
from .errors import InvalidInput, Report

EULER_BOUNDS = (2, 4, 5, 6)


class Digraph:
    """A finite multidigraph with integer vertex and edge identifiers.

    Loops and parallel edges are allowed.  Edges are ``eid -> (tail, head)``.
    """

    __slots__ = ("_vertices", "_vset", "_edges", "_out", "_in", "_hash")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int, int]] = ()):
        vset = set(vertices)
        emap: dict[int, tuple[int, int]] = {}
        for eid, t, h in edges:
            if eid in emap:
                raise InvalidInput(f"duplicate edge id {eid}")
            if t not in vset or h not in vset:
                raise InvalidInput(f"edge {eid} references unknown vertex")
            emap[eid] = (t, h)
        self._vertices = tuple(sorted(vset))
        self._vset = frozenset(vset)
        self._edges = MappingProxyType(dict(sorted(emap.items())))
        out: dict[int, list[int]] = {v: [] for v in self._vertices}
        inn: dict[int, list[int]] = {v: [] for v in self._vertices}
        for eid, (t, h) in self._edges.items():
            out[t].append(eid)
            inn[h].append(eid)
        self._out = {v: tuple(es) for v, es in out.items()}
        self._in = {v: tuple(es) for v, es in inn.items()}
        self._hash = None

    # construction helpers

    @classmethod
    def from_arcs(cls, arcs: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Digraph":
        """Build from ``(tail, head)`` pairs; edge ids are assigned 0, 1, ..."""
        arcs = list(arcs)
        vs = set(vertices)
        for t, h in arcs:
            vs.update((t, h))
        return cls(vs, ((i, t, h) for i, (t, h) in enumerate(arcs)))

    # basic queries

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def vertex_set(self) -> frozenset[int]:
        return self._vset

    @property
    def edges(self) -> Mapping[int, tuple[int, int]]:
        return self._edges

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v: object) -> bool:
        return v in self._vset

    def num_edges(self) -> int:
        return len(self._edges)

    def tail(self, e: int) -> int:
        return self._edges[e][0]

    def head(self, e: int) -> int:
        return self._edges[e][1]

    def out_edges(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_edges(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def successors(self, v: int) -> list[int]:
        return [self._edges[e][1] for e in self._out[v]]

    def predecessors(self, v: int) -> list[int]:
        return [self._edges[e][0] for e in self._in[v]]

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e for e in self._out[u] if self._edges[e][1] == v]

    def is_loop(self, e: int) -> bool:
        t, h = self._edges[e]
        return t == h

    def next_edge_id(self) -> int:
        return max(self._edges, default=-1) + 1

    def next_vertex_id(self) -> int:
        return max(self._vertices, default=-1) + 1

    # derived digraphs

    def subgraph(self, vertices: Iterable[int] | None = None, edges: Iterable[int] | None = None) -> "Digraph":
        """Subdigraph on the given vertices and edges.

        ``edges=None`` keeps every edge whose ends survive.
        """
        vs = self._vset if vertices is None else frozenset(vertices)
        if edges is None:
            es = [e for e, (t, h) in self._edges.items() if t in vs and h in vs]
        else:
            es = list(edges)
        return Digraph(vs, ((e, *self._edges[e]) for e in es))

    def delete_vertices(self, xs: Iterable[int]) -> "Digraph":
        """``D - X``: drop the vertices and every edge touching them."""
        xs = set(xs)
        return self.subgraph(self._vset - xs)

    def induced(self, xs: Iterable[int]) -> "Digraph":
        """``D | X``."""
        return self.subgraph(set(xs) & self._vset)

    def delete_edges(self, es: Iterable[int]) -> "Digraph":
        drop = set(es)
        return self.subgraph(self._vset, [e for e in self._edges if e not in drop])

    def with_edges(self, arcs: Iterable[tuple[int, int, int]], vertices: Iterable[int] = ()) -> "Digraph":
        vs = set(self._vset) | set(vertices)
        return Digraph(vs, [(e, t, h) for e, (t, h) in self._edges.items()] + list(arcs))

    def union(self, other: "Digraph") -> "Digraph":
        es = dict(self._edges)
        for e, th in other.edges.items():
            if e in es and es[e] != th:
                raise InvalidInput(f"edge {e} differs between operands")
            es[e] = th
        return Digraph(self._vset | other.vertex_set, ((e, t, h) for e, (t, h) in es.items()))

    def reverse(self) -> "Digraph":
        return Digraph(self._vset, ((e, h, t) for e, (t, h) in self._edges.items()))

    # identity

    def key(self) -> tuple:
        return (self._vertices, tuple(self._edges.items()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Digraph) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key())
        return self._hash

    def __repr__(self) -> str:
        return f"Digraph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

    # reachability

    def reachable(self, sources: Iterable[int], forbidden: Iterable[int] = (), reverse: bool = False) -> set[int]:
        """Vertices reachable by directed paths from ``sources`` avoiding ``forbidden``."""
        bad = set(forbidden)
        seen = {s for s in sources if s in self._vset and s not in bad}
        stack = list(seen)
        adj = self._in if reverse else self._out
        end = 0 if reverse else 1
        while stack:
            u = stack.pop()
            for e in adj[u]:
                w = self._edges[e][end]
                if w not in seen and w not in bad:
                    seen.add(w)
                    stack.append(w)
        return seen

    def weak_components(self) -> list[frozenset[int]]:
        parent = {v: v for v in self._vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h in self._edges.values():
            a, b = find(t), find(h)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, set[int]] = defaultdict(set)
        for v in self._vertices:
            groups[find(v)].add(v)
        return sorted((frozenset(g) for g in groups.values()), key=min)

    def is_weakly_connected(self) -> bool:
        return len(self._vertices) > 0 and len(self.weak_components()) == 1

    def is_strongly_connected(self) -> bool:
        if not self._vertices:
            return False
        v = self._vertices[0]
        return len(self.reachable([v])) == len(self._vertices) == len(self.reachable([v], reverse=True))

    def is_acyclic(self) -> bool:
        return all(len(c) == 1 for c in strong_components(self)) and not any(
            t == h for t, h in self._edges.values()
        )


# ---------------------------------------------------------------------------
# directed paths


@dataclass(frozen=True)
class DirectedPath:
    """Alternating vertex/edge sequence ``v0 e0 v1 e1 ... vk``.

    A circuit repeats its first vertex at the end.  A zero-length path has a
    single vertex and no edges.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        if len(self.vertices) != len(self.edges) + 1:
            raise InvalidInput("path needs exactly one more vertex than edges")

    @classmethod
    def from_vertices(cls, D: Digraph, vs: Sequence[int]) -> "DirectedPath":
        """Path through ``vs`` using the smallest-id edge between each pair."""
        es = []
        for u, w in zip(vs, vs[1:]):
            cand = D.edges_between(u, w)
            if not cand:
                raise InvalidInput(f"no edge {u}->{w}")
            es.append(min(cand))
        return cls(tuple(vs), tuple(es))

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def finish(self) -> int:
        return self.vertices[-1]

    @property
    def is_circuit(self) -> bool:
        return len(self.edges) > 0 and self.vertices[0] == self.vertices[-1]

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def distinct_vertices(self) -> tuple[int, ...]:
        return self.vertices[:-1] if self.is_circuit else self.vertices

    def __len__(self) -> int:
        return len(self.edges)

    def position(self, v: int) -> int:
        return self.vertices.index(v)

    def subpath(self, i: int, j: int) -> "DirectedPath":
        """Sub-path from vertex index ``i`` to vertex index ``j`` inclusive."""
        if not 0 <= i <= j < len(self.vertices):
            raise InvalidInput(f"bad sub-path range {i}..{j}")
        return DirectedPath(self.vertices[i : j + 1], self.edges[i:j])

    def between(self, u: int, v: int) -> "DirectedPath":
        """``P[u, v]``."""
        return self.subpath(self.position(u), self.position(v))

    def concat(self, other: "DirectedPath") -> "DirectedPath":
        if self.finish != other.start:
            raise InvalidInput("paths do not chain")
        return DirectedPath(self.vertices + other.vertices[1:], self.edges + other.edges)

    def check(self, D: Digraph) -> Report:
        """Itemised check that this is a genuine directed path (or circuit) of ``D``."""
        rep = Report()
        for v in self.vertices:
            if v not in D:
                rep.add("dangling-vertex", str(v))
        for i, e in enumerate(self.edges):
            if e not in D.edges:
                rep.add("dangling-edge", str(e))
                continue
            if D.edges[e] != (self.vertices[i], self.vertices[i + 1]):
                rep.add("chain", f"edge {e} does not join {self.vertices[i]}->{self.vertices[i + 1]}")
        inner = self.distinct_vertices()
        if len(set(inner)) != len(inner):
            rep.add("simple", "repeated vertex")
        if len(set(self.edges)) != len(self.edges):
            rep.add("simple", "repeated edge")
        return rep


def path_from_edges(D: Digraph, edges: Sequence[int], start: int | None = None) -> DirectedPath:
    if not edges:
        if start is None:
            raise InvalidInput("empty edge list needs a start vertex")
        return DirectedPath((start,), ())
    vs = [D.tail(edges[0])] + [D.head(e) for e in edges]
    return DirectedPath(tuple(vs), tuple(edges))


# ---------------------------------------------------------------------------
# strong components


def strong_components(D: Digraph) -> list[frozenset[int]]:
    """Partition of ``V(D)`` into strong components, sorted by smallest vertex.

    Iterative Tarjan; the canonical representative of a component is its
    minimum vertex.
    """
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset[int]] = []
    counter = count()
    for root in D.vertices:
        if root in index:
            continue
        work = [(root, iter(D.successors(root)))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = next(counter)
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(D.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return sorted(comps, key=min)


def component_of(D: Digraph, v: int) -> frozenset[int]:
    """Strong component of ``D`` containing ``v``."""
    return frozenset(D.reachable([v]) & D.reachable([v], reverse=True))


def boundary_edges(D: Digraph, X: Iterable[int]) -> tuple[frozenset[int], frozenset[int]]:
    """``(delta+(X), delta-(X))``: edges entering ``X`` and edges leaving ``X``."""
    X = set(X)
    if not X <= D.vertex_set:
        raise InvalidInput("X is not a subset of V(D)")
    into = frozenset(e for e, (t, h) in D.edges.items() if h in X and t not in X)
    out = frozenset(e for e, (t, h) in D.edges.items() if t in X and h not in X)
    return into, out


# ---------------------------------------------------------------------------
# Menger


@dataclass(frozen=True)
class MengerResult:
    """Exactly one of ``paths`` (k disjoint A->B paths) or ``separator`` is set."""

    k: int
    paths: tuple[DirectedPath, ...] | None = None
    separator: frozenset[int] | None = None

    @property
    def linked(self) -> bool:
        return self.paths is not None


def _split_network(D: Digraph, A: set[int], B: set[int]) -> tuple[FlowNetwork, dict[int, int]]:
    net = FlowNetwork()
    net.node("S")
    edge_arc: dict[int, int] = {}
    for v in D.vertices:
        net.add_arc(("i", v), ("o", v), 1)
    for e, (t, h) in D.edges.items():
        if t != h:
            edge_arc[e] = net.add_arc(("o", t), ("i", h), INF)
    for a in sorted(A):
        net.add_arc("S", ("i", a), INF)
    for b in sorted(B):
        net.add_arc(("o", b), "T", INF)
    net.node("T")
    return net, edge_arc


def max_disjoint_paths(D: Digraph, A: Iterable[int], B: Iterable[int], limit: float = INF):
    """Maximum family (capped at ``limit``) of vertex-disjoint A->B paths.

    Returns ``(paths, separator)``; the separator is a minimum vertex set
    meeting every A->B path and is only meaningful when the cap was not hit.
    """
    A, B = set(A), set(B)
    net, edge_arc = _split_network(D, A, B)
    value = net.max_flow("S", "T", limit)
    arc_of = {}
    for e, k in edge_arc.items():
        if net.flow_on(k) > 0:
            arc_of.setdefault(D.tail(e), []).append(e)
    paths = []
    for a in sorted(A):
        k_src = next(k for k in net.adj[net.index["S"]] if net.head[k] == net.index[("i", a)])
        if net.flow_on(k_src) == 0:
            continue
        vs, es = [a], []
        v = a
        while not _takes_sink(net, v):
            e = arc_of[v].pop(0)
            es.append(e)
            v = D.head(e)
            vs.append(v)
        paths.append(DirectedPath(tuple(vs), tuple(es)))
    separator = None
    if value < limit:
        R = net.reachable("S")
        separator = frozenset(v for v in D.vertices if ("i", v) in R and ("o", v) not in R)
    return paths, separator


def _takes_sink(net: FlowNetwork, v: int) -> bool:
    key = ("o", v)
    if key not in net.index:
        return False
    t = net.index["T"]
    return any(net.head[k] == t and k % 2 == 0 and net.flow_on(k) > 0 for k in net.adj[net.index[key]])


def menger_paths(D: Digraph, A: Iterable[int], B: Iterable[int], k: int) -> MengerResult:
    """Either ``k`` vertex-disjoint directed A->B paths or a separator of size < k.

    Vertices in ``A & B`` are linked by zero-length paths.
    """
    if k <= 0:
        raise InvalidInput("k must be positive")
    A, B = set(A), set(B)
    if not (A <= D.vertex_set and B <= D.vertex_set):
        raise InvalidInput("A and B must be vertex subsets of D")
    paths, sep = max_disjoint_paths(D, A, B, limit=k)
    if len(paths) >= k:
        return MengerResult(k, paths=tuple(sorted(paths[:k], key=lambda p: p.start)))
    return MengerResult(k, separator=sep)


def check_disjoint_paths(D: Digraph, A: Iterable[int], B: Iterable[int], paths: Sequence[DirectedPath]) -> Report:
    """Independent checker for the path branch of :func:`menger_paths`."""
    A, B = set(A), set(B)
    rep = Report()
    used: set[int] = set()
    for p in paths:
        rep.extend(p.check(D))
        if p.start not in A:
            rep.add("start", f"{p.start} not in A")
        if p.finish not in B:
            rep.add("finish", f"{p.finish} not in B")
        vs = set(p.vertices)
        if vs & used:
            rep.add("disjoint", f"paths share {sorted(vs & used)}")
        used |= vs
    return rep


def check_separator(D: Digraph, A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> Report:
    """Independent checker for the separator branch: no A->B path avoids C."""
    C = set(C)
    rep = Report()
    hit = D.reachable(set(A) - C, forbidden=C) & set(B)
    if hit:
        rep.add("separates", f"B reachable at {sorted(hit)}")
    return rep


# ---------------------------------------------------------------------------
# k-eulerianizability


@dataclass(frozen=True)
class EulerMultiplicity:
    """Edge multiplicities making every vertex balanced with degree at most ``bound``."""

    multiplicity: Mapping[int, int]
    bound: int

    def degrees(self, D: Digraph) -> dict[int, tuple[int, int]]:
        deg = {v: [0, 0] for v in D.vertices}
        for e, m in self.multiplicity.items():
            t, h = D.edges[e]
            deg[t][1] += m
            deg[h][0] += m
        return {v: (i, o) for v, (i, o) in deg.items()}

    def check(self, D: Digraph) -> Report:
        rep = Report()
        if set(self.multiplicity) != set(D.edges):
            rep.add("coverage", "multiplicity keys differ from E(D)")
            return rep
        for e, m in self.multiplicity.items():
            if m < 1:
                rep.add("positive", f"edge {e} has multiplicity {m}")
        for v, (i, o) in self.degrees(D).items():
            if i != o:
                rep.add("balanced", f"vertex {v}: in {i} != out {o}")
            if o > self.bound:
                rep.add("bound", f"vertex {v}: degree {o} > {self.bound}")
        return rep


def _circulation_feasible(D: Digraph, k: int, lower: Mapping[int, int], upper: Mapping[int, int]) -> dict[int, int] | None:
    net = FlowNetwork()
    excess: dict = defaultdict(int)
    arcs = {}
    for v in D.vertices:
        net.add_arc(("i", v), ("o", v), k)
    for e, (t, h) in D.edges.items():
        lo, hi = lower[e], upper[e]
        if lo > hi:
            return None
        arcs[e] = net.add_arc(("o", t), ("i", h), hi - lo)
        excess[("i", h)] += lo
        excess[("o", t)] -= lo
    need = 0
    for node, x in sorted(excess.items(), key=repr):
        if x > 0:
            net.add_arc("SS", node, x)
            need += x
        elif x < 0:
            net.add_arc(node, "TT", -x)
    net.node("SS")
    net.node("TT")
    if net.max_flow("SS", "TT") < need:
        return None
    return {e: lower[e] + int(net.flow_on(k)) for e, k in arcs.items()}


def eulerianize(D: Digraph, k: int) -> EulerMultiplicity | None:
    """Lexicographically least multiplicity vector making ``D`` eulerian with degrees <= k.

    Returns ``None`` when no assignment exists; that answer is exact because
    feasibility is decided as an integer circulation with lower bound 1 per
    edge and vertex throughput ``k``.
    """
    if k not in EULER_BOUNDS:
        raise InvalidInput(f"k must be one of {EULER_BOUNDS}")
    if not D.is_weakly_connected():
        raise InvalidInput("digraph must be weakly connected")
    if k == 2 and not D.is_strongly_connected():
        raise InvalidInput("2-eulerianizability requires a strongly connected digraph")
    lower = {e: 1 for e in D.edges}
    upper = {e: k for e in D.edges}
    if _circulation_feasible(D, k, lower, upper) is None:
        return None
    for e in D.edges:
        for c in range(1, k + 1):
            lower[e] = upper[e] = c
            if _circulation_feasible(D, k, lower, upper) is not None:
                break
        else:  # pragma: no cover - feasibility above guarantees a value
            raise AssertionError("circulation became infeasible")
    return EulerMultiplicity(MappingProxyType(dict(lower)), k)


def is_eulerian(D: Digraph) -> bool:
    return all(D.in_degree(v) == D.out_degree(v) for v in D.vertices)


# ---------------------------------------------------------------------------
# small generators used across the package and its tests


def directed_cycle(n: int, start: int = 0) -> Digraph:
    vs = list(range(start, start + n))
    return Digraph.from_arcs(((vs[i], vs[(i + 1) % n]) for i in range(n)), vs)


def directed_path(n: int) -> Digraph:
    return Digraph.from_arcs(((i, i + 1) for i in range(n - 1)), range(n))


def bidirected_complete(k: int) -> Digraph:
    return Digraph.from_arcs(((u, v) for u in range(k) for v in range(k) if u != v), range(k))


def bidirected(G_vertices: Iterable[int], G_edges: Iterable[tuple[int, int]]) -> Digraph:
    """Digraph with both orientations of every undirected edge."""
    arcs = []
    for u, v in G_edges:
        arcs += [(u, v), (v, u)]
    return Digraph.from_arcs(arcs, G_vertices)

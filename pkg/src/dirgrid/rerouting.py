"""Rerouting crossing path systems in disk and cylinder embeddings.

Both entry points search for a routing that uses as few edges as possible,
throw away everything else, butterfly contract the edges that two paths share,
and then check the result.  The checks, not the search, are the contract.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .digraph import Digraph, DirectedPath, path_from_edges
from .embedding import (
    RotationEmbedding,
    edge_sides,
    left_right_order,
    path_sides,
    top_bottom_order,
    validate_embedding,
    winding,
)
from .errors import Budget, DirgridError, Exhausted, InvalidInput, Report
from .minors import MinorModel, butterfly_contract, hits_in_reverse

__all__ = [
    "RoutedSystem",
    "RerouteFailed",
    "hits_in_reverse",
    "validate_routed_system",
    "property_iii",
    "check_disk_reroute",
    "cylinder_property",
    "reroute_disk",
    "reroute_cylinder",
    "routing_edge_count",
    "contract_union",
]


class RerouteFailed(DirgridError):
    """The rerouted system failed its own output checks."""

    def __init__(self, report: Report):
        super().__init__(f"rerouted system failed verification:\n{report}")
        self.report = report


@dataclass(frozen=True)
class RoutedSystem:
    """Horizontals (R->L paths, or circuits on a cylinder) and verticals.

    Disk verticals run B->T.  Cylinder verticals run between the two
    boundaries; when the embedding carries no T/B marks their ends are free.
    """

    embedding: RotationEmbedding
    horizontals: tuple[DirectedPath, ...]
    verticals: tuple[DirectedPath, ...]

    def __post_init__(self):
        object.__setattr__(self, "horizontals", tuple(self.horizontals))
        object.__setattr__(self, "verticals", tuple(self.verticals))

    @property
    def host(self) -> Digraph:
        return self.embedding.host

    @property
    def paths(self) -> tuple[DirectedPath, ...]:
        return self.horizontals + self.verticals

    def edges_used(self) -> set[int]:
        return {e for P in self.paths for e in P.edges}

    def vertices_used(self) -> set[int]:
        return {v for P in self.paths for v in P.vertices}


def routing_edge_count(paths: Iterable[DirectedPath]) -> int:
    return len({e for P in paths for e in P.edges})


def validate_routed_system(S: RoutedSystem) -> Report:
    r = Report()
    E = S.embedding
    r.extend(validate_embedding(E), "embedding-")
    if not S.horizontals or not S.verticals:
        r.add("missing", "both path families must be non-empty")
        return r
    D = S.host
    for name, fam in (("H", S.horizontals), ("V", S.verticals)):
        for i, P in enumerate(fam):
            r.extend(P.check(D), f"{name}{i}-")
        for a, b in combinations(range(len(fam)), 2):
            if fam[a].vertex_set() & fam[b].vertex_set():
                r.add("family-disjoint", f"{name}{a} and {name}{b} share a vertex")
    if not r.ok:
        return r
    marks = {k: set(v) for k, v in E.marks.items()}
    if E.mode == "disk":
        for i, P in enumerate(S.horizontals):
            if P.is_circuit or P.start not in marks.get("R", ()) or P.finish not in marks.get("L", ()):
                r.add("endpoints", f"H{i} does not run from R to L")
        for i, P in enumerate(S.verticals):
            if P.is_circuit or P.start not in marks.get("B", ()) or P.finish not in marks.get("T", ()):
                r.add("endpoints", f"V{i} does not run from B to T")
    else:
        for i, C in enumerate(S.horizontals):
            if not C.is_circuit:
                r.add("circuit", f"H{i} is not a circuit")
        ends = marks.get("T", set()) | marks.get("B", set())
        for i, P in enumerate(S.verticals):
            if P.is_circuit:
                r.add("endpoints", f"V{i} is a circuit")
            elif ends:
                roles = {E.roles.get(P.start), E.roles.get(P.finish)}
                if roles != {"T", "B"}:
                    r.add("endpoints", f"V{i} does not join the two boundaries")
    return r


# ---------------------------------------------------------------------------
# property (iii)


def _extremes(S: RoutedSystem) -> tuple[DirectedPath, DirectedPath]:
    """Right-most original vertical and top-most original horizontal."""
    E = S.embedding
    right = S.verticals[left_right_order(E, S.verticals)[-1]]
    top = S.horizontals[top_bottom_order(E, S.horizontals)[-1]]
    return right, top


class _WeakSide:
    """Membership test for the closed left (= low) side of a boundary curve."""

    def __init__(self, E: RotationEmbedding, C: DirectedPath):
        self.curve = C
        self.vs = path_sides(E, C)
        self.es = edge_sides(E, C)
        self.cv, self.ce = C.vertex_set(), set(C.edges)

    def bad_vertices(self, P: DirectedPath) -> list[int]:
        return [v for v in P.vertices if v not in self.cv and self.vs.get(v) != -1]

    def bad_edges(self, P: DirectedPath) -> list[int]:
        return [e for e in P.edges if e not in self.ce and self.es.get(e) != -1]

    def ok(self, P: DirectedPath) -> bool:
        return not self.bad_vertices(P) and not self.bad_edges(P)


def property_iii(original: RoutedSystem, horizontals: Sequence[DirectedPath], verticals: Sequence[DirectedPath]) -> Report:
    """Verticals weakly left of the original right-most vertical, horizontals
    weakly below the original top-most horizontal.

    Paths are compared through vertex and edge ids of the original host, so
    the paths of a butterfly minor (which keep surviving ids) can be checked
    directly.
    """
    r = Report()
    right, top = _extremes(original)
    E = original.embedding
    for name, fam, C in (("V", verticals, right), ("H", horizontals, top)):
        side = _WeakSide(E, C)
        for i, P in enumerate(fam):
            bv, be = side.bad_vertices(P), side.bad_edges(P)
            if bv or be:
                where = "right of the right-most" if name == "V" else "above the top-most"
                r.add("property-iii", f"{name}{i} strays {where} original path (vertices {bv}, edges {be})")
    return r


# ---------------------------------------------------------------------------
# candidate routings


def _paths_between(D: Digraph, sources: Iterable[int], sinks: Iterable[int], keep, bud: Budget) -> list[DirectedPath]:
    """All simple paths from a source to a sink accepted by ``keep``."""
    sinks = set(sinks)
    out: list[DirectedPath] = []

    def go(vs, es):
        bud.tick()
        v = vs[-1]
        if v in sinks and es:
            P = DirectedPath(tuple(vs), tuple(es))
            if keep(P):
                out.append(P)
            return
        for e in D.out_edges(v):
            w = D.head(e)
            if w in vs:
                continue
            vs.append(w)
            es.append(e)
            go(vs, es)
            vs.pop()
            es.pop()

    for s in sorted(set(sources)):
        go([s], [])
    out.sort(key=lambda P: (len(P.edges), P.edges))
    return out


def _disjoint_families(cands: Sequence[DirectedPath], k: int, bit: dict[int, int], bud: Budget) -> list[tuple[int, tuple[int, ...]]]:
    """Every k-set of pairwise vertex-disjoint candidates, as (edge mask, indices)."""
    vsets = [P.vertex_set() for P in cands]
    masks = [sum(1 << bit[e] for e in set(P.edges)) for P in cands]
    out = []

    def go(start, chosen, used, mask):
        if len(chosen) == k:
            out.append((mask, tuple(chosen)))
            return
        for i in range(start, len(cands)):
            bud.tick()
            if vsets[i] & used:
                continue
            chosen.append(i)
            go(i + 1, chosen, used | vsets[i], mask | masks[i])
            chosen.pop()

    go(0, [], frozenset(), 0)
    return out


def _minimal_pair(fa, fb, prefer: tuple[tuple[int, ...], tuple[int, ...]] | None, bud: Budget):
    """The pair of families with the smallest edge union.

    Ties go to ``prefer`` (the input routing), then to the lexicographically
    least index tuples.
    """
    fa = sorted(fa, key=lambda x: (x[0].bit_count(), x[1]))
    fb = sorted(fb, key=lambda x: (x[0].bit_count(), x[1]))
    best = None
    for ma, ia in fa:
        ca = ma.bit_count()
        if best is not None and ca > best[0]:
            break
        for mb, ib in fb:
            if best is not None and mb.bit_count() > best[0]:
                break
            bud.tick()
            key = ((ma | mb).bit_count(), 0 if (ia, ib) == prefer else 1, ia, ib)
            if best is None or key < best:
                best = key
    return best


def _index_of(cands: Sequence[DirectedPath], fam: Sequence[DirectedPath]) -> tuple[int, ...] | None:
    idx = []
    for P in fam:
        hit = [i for i, Q in enumerate(cands) if Q.vertices == P.vertices and Q.edges == P.edges]
        if not hit:
            return None
        idx.append(hit[0])
    return tuple(sorted(idx))


# ---------------------------------------------------------------------------
# finishing: delete, contract, rename


def contract_union(D: Digraph, groups: Sequence[Sequence[DirectedPath]], E: RotationEmbedding | None = None):
    """Keep only the union of the paths, then contract every edge two paths share.

    Returns ``(model, host, embedding, groups)``; the embedding is carried
    along when given (else ``None``).  Merged vertices keep the tail id, so
    the paths keep their ids apart from contracted edges.
    """
    allp = [P for g in groups for P in g]
    used_v = {v for P in allp for v in P.vertices}
    used_e = {e for P in allp for e in P.edges}
    uses: dict[int, int] = {}
    for P in allp:
        for e in set(P.edges):
            uses[e] = uses.get(e, 0) + 1
    shared = sorted(e for e, c in uses.items() if c > 1)
    script = [("del_v", v) for v in D.vertices if v not in used_v]
    script += [("del_e", e) for e in D.edges if e not in used_e and set(D.edges[e]) <= used_v]
    cur = D.subgraph(sorted(used_v), sorted(used_e))
    emb = E.restrict(cur) if E is not None else None
    alias: dict[int, int] = {}

    def find(v):
        while v in alias:
            v = alias[v]
        return v

    groups = [list(g) for g in groups]
    for e in shared:
        t, h = cur.edges[e]
        cur = butterfly_contract(cur, e)
        if emb is not None:
            emb = emb.contract(e)
        alias[h] = t
        script.append(("contract", e))
        for g in groups:
            for i, P in enumerate(g):
                es = [f for f in P.edges if f != e]
                if es:
                    g[i] = path_from_edges(cur, es)
                else:
                    g[i] = DirectedPath((find(P.start),), ())
    model = MinorModel(tuple(script), {v: v for v in cur.vertices})
    return model, cur, emb, [tuple(g) for g in groups]


def _finalize(E: RotationEmbedding, groups: Sequence[Sequence[DirectedPath]]):
    model, _, emb, groups = contract_union(E.host, groups, E)
    return model, emb, groups


# ---------------------------------------------------------------------------
# disk


def check_disk_reroute(original: RoutedSystem, model: MinorModel, out: RoutedSystem) -> Report:
    """All output guarantees of :func:`reroute_disk`."""
    r = Report()
    if len(out.horizontals) != len(original.horizontals) or len(out.verticals) != len(original.verticals):
        r.add("counts", "path counts changed")
        return r
    r.extend(model.verify(original.host, out.host), "model-")
    try:
        replayed = model.replay(original.host)
        if replayed.key() != out.host.key():
            r.add("replay", "script does not reproduce the output digraph")
    except InvalidInput as exc:
        r.add("replay", str(exc))
    r.extend(validate_routed_system(out), "system-")
    if not r.ok:
        return r
    for i, P in enumerate(out.horizontals):
        for j, Q in enumerate(out.verticals):
            if not hits_in_reverse(P, Q):
                r.add("reverse", f"H{i} and V{j} do not hit in reverse")
            if set(P.edges) & set(Q.edges):
                r.add("shared-edge", f"H{i} and V{j} share an edge")
    r.extend(property_iii(original, out.horizontals, out.verticals))
    return r


def _canonical_order(E: RotationEmbedding, hs, vs):
    hs = [hs[i] for i in top_bottom_order(E, hs)]
    vs = [vs[i] for i in left_right_order(E, vs)]
    return tuple(hs), tuple(vs)


def _exact_disk(S: RoutedSystem, bud: Budget):
    E, D = S.embedding, S.host
    right, top = _extremes(S)
    left_of, below = _WeakSide(E, right), _WeakSide(E, top)
    m = E.marks
    vc = _paths_between(D, m.get("B", ()), m.get("T", ()), left_of.ok, bud)
    hc = _paths_between(D, m.get("R", ()), m.get("L", ()), below.ok, bud)
    bit = {e: i for i, e in enumerate(D.edges)}
    vf = _disjoint_families(vc, len(S.verticals), bit, bud)
    hf = _disjoint_families(hc, len(S.horizontals), bit, bud)
    if not vf or not hf:
        # the input routing itself always qualifies, so this means a bad input
        raise InvalidInput("no routing satisfies property (iii); is the input system valid?")
    prefer = (_index_of(vc, S.verticals), _index_of(hc, S.horizontals))
    best = _minimal_pair(vf, hf, prefer, bud)
    _, _, iv, ih = best
    return [hc[i] for i in ih], [vc[i] for i in iv]


def _simple_paths_in(D: Digraph, a: int, b: int, bud: Budget, limit: int = 64) -> list[DirectedPath]:
    found: list[DirectedPath] = []

    def go(vs, es):
        bud.tick()
        if len(found) >= limit:
            return
        for e in D.out_edges(vs[-1]):
            w = D.head(e)
            if w == b:
                found.append(DirectedPath(tuple(vs) + (w,), tuple(es) + (e,)))
            elif w not in vs:
                go(vs + [w], es + [e])

    go([a], [])
    found.sort(key=lambda P: (len(P.edges), P.edges))
    return found


def _local_disk(S: RoutedSystem, bud: Budget):
    """Shortcut sub-paths through edges already in use until nothing improves.

    Each accepted move strictly lowers the number of edges used, so this
    terminates.  The moves cover the proof's horizontal-along-vertical and
    vertical-along-horizontal shortcuts.
    """
    E, D = S.embedding, S.host
    right, top = _extremes(S)
    sides = {"V": _WeakSide(E, right), "H": _WeakSide(E, top)}
    fams = {"H": list(S.horizontals), "V": list(S.verticals)}
    while True:
        count = routing_edge_count(fams["H"] + fams["V"])
        union = D.subgraph(None, sorted({e for P in fams["H"] + fams["V"] for e in P.edges}))
        moved = False
        for name in ("H", "V"):
            fam = fams[name]
            for k, X in enumerate(fam):
                others = set().union(*(P.vertex_set() for j, P in enumerate(fam) if j != k))
                n = len(X.vertices)
                for i in range(n):
                    for j in range(i + 1, n):
                        for Y in _simple_paths_in(union, X.vertices[i], X.vertices[j], bud):
                            if Y.edges == X.edges[i:j]:
                                continue
                            new = DirectedPath(X.vertices[:i] + Y.vertices + X.vertices[j + 1:], X.edges[:i] + Y.edges + X.edges[j:])
                            if len(set(new.vertices)) != len(new.vertices) or new.vertex_set() & others:
                                continue
                            if not sides[name].ok(new):
                                continue
                            trial = fam[:k] + [new] + fam[k + 1:]
                            rest = fams["V"] if name == "H" else fams["H"]
                            if routing_edge_count(trial + rest) < count:
                                fam[k] = new
                                moved = True
                                break
                        if moved:
                            break
                    if moved:
                        break
                if moved:
                    break
            if moved:
                break
        if not moved:
            return fams["H"], fams["V"]


def reroute_disk(S: RoutedSystem, mode: str = "exact", budget: int | Budget | None = 1_000_000):
    """Reroute a disk system so that horizontals and verticals hit in reverse.

    Returns ``(model, system)``; ``system`` lives in ``model.replay(host)``
    and keeps the original vertex and edge ids.  Raises :class:`RerouteFailed`
    if the result does not pass :func:`check_disk_reroute`.
    """
    if mode not in ("exact", "local"):
        raise InvalidInput(f"unknown mode {mode!r}")
    if S.embedding.mode != "disk":
        raise InvalidInput("reroute_disk needs a disk embedding")
    rep = validate_routed_system(S)
    if not rep.ok:
        raise InvalidInput(f"invalid routed system:\n{rep}")
    bud = Budget.of(budget, "rerouting")
    hs, vs = (_exact_disk if mode == "exact" else _local_disk)(S, bud)
    hs, vs = _canonical_order(S.embedding, hs, vs)
    model, emb, (hs2, vs2) = _finalize(S.embedding, [hs, vs])
    out = RoutedSystem(emb, hs2, vs2)
    rep = check_disk_reroute(S, model, out)
    if not rep.ok:
        raise RerouteFailed(rep)
    return model, out


# ---------------------------------------------------------------------------
# cylinder


def _arc_of_circuit(Q: DirectedPath, y: int, x: int) -> list[int]:
    """Edges of circuit ``Q`` walked from ``y`` to ``x``."""
    k = len(Q.edges)
    i, j = Q.vertices.index(y), Q.vertices.index(x)
    out = []
    while i != j:
        out.append(Q.edges[i])
        i = (i + 1) % k
    return out


def cylinder_property(E: RotationEmbedding, circuits: Sequence[DirectedPath], paths: Sequence[DirectedPath]) -> Report:
    """For each circuit Q and each minimal sub-path P of a path joining two
    vertices of Q, P and Q together hold a circuit that does not separate the
    boundaries."""
    r = Report()
    for qi, Q in enumerate(circuits):
        qv, qe = Q.vertex_set(), set(Q.edges)
        for pi, P in enumerate(paths):
            hits = [i for i, v in enumerate(P.vertices) if v in qv]
            for a, b in zip(hits, hits[1:]):
                sub = P.subpath(a, b)
                if set(sub.edges) <= qe:
                    r.add("along", f"path {pi} runs along circuit {qi} from {sub.start} to {sub.finish}")
                    continue
                loop = list(sub.edges) + _arc_of_circuit(Q, sub.finish, sub.start)
                if winding(E, loop) % 2:
                    r.add("wrap", f"path {pi} wraps the hole with circuit {qi} between {sub.start} and {sub.finish}")
    return r


def _orientation(E: RotationEmbedding, circuits: Sequence[DirectedPath]) -> int:
    ws = []
    for i, C in enumerate(circuits):
        if not C.is_circuit:
            raise InvalidInput(f"member {i} of the circuit family is not a circuit")
        w = winding(E, C.edges)
        if w % 2 == 0:
            raise InvalidInput(f"circuit {i} does not separate the boundaries")
        ws.append(w)
    if len(set(ws)) > 1:
        raise InvalidInput("circuits are not consistently oriented")
    for a, b in combinations(range(len(circuits)), 2):
        if circuits[a].vertex_set() & circuits[b].vertex_set():
            raise InvalidInput(f"circuits {a} and {b} share a vertex")
    return ws[0] if ws else 1


def _circuit_candidates(D: Digraph, E: RotationEmbedding, w: int, bud: Budget) -> list[DirectedPath]:
    import networkx as nx

    G = nx.DiGraph()
    G.add_nodes_from(D.vertices)
    G.add_edges_from((t, h) for t, h in D.edges.values() if t != h)
    out = []
    for cyc in nx.simple_cycles(G):
        bud.tick()
        if len(cyc) < 2:
            continue
        # rotate so the circuit starts at its smallest vertex
        i = cyc.index(min(cyc))
        vs = list(cyc[i:]) + list(cyc[:i])
        pairs = list(zip(vs, vs[1:] + vs[:1]))
        for es in _edge_choices(D, pairs):
            if winding(E, es) == w:
                out.append(DirectedPath(tuple(vs) + (vs[0],), tuple(es)))
    out.sort(key=lambda C: (len(C.edges), C.edges))
    return out


def _edge_choices(D: Digraph, pairs):
    opts = [sorted(D.edges_between(a, b)) for a, b in pairs]
    out = [[]]
    for o in opts:
        out = [x + [e] for x in out for e in o]
    return out


def _same_circuit(C: DirectedPath, K: DirectedPath) -> bool:
    return set(C.edges) == set(K.edges)


def reroute_cylinder(S: RoutedSystem, F: Sequence[DirectedPath] | None = None, budget: int | Budget | None = 1_000_000):
    """Reroute paths and circuits on a cylinder so no path wraps the hole with a circuit.

    ``F`` defaults to ``S.horizontals``.  If the property already holds the
    system is returned unchanged with an empty script.
    """
    E = S.embedding
    if E.mode != "cylinder":
        raise InvalidInput("reroute_cylinder needs a cylinder embedding")
    F = tuple(S.horizontals if F is None else F)
    S = RoutedSystem(E, F, S.verticals)
    rep = validate_routed_system(S)
    if not rep.ok:
        raise InvalidInput(f"invalid routed system:\n{rep}")
    w = _orientation(E, F)
    if cylinder_property(E, F, S.verticals).ok:
        return MinorModel((), {v: v for v in S.host.vertices}), S
    bud = Budget.of(budget, "rerouting")
    D = S.host
    roles = E.roles
    sources, sinks = set(), set()
    for P in S.verticals:
        rs, rf = roles.get(P.start), roles.get(P.finish)
        sources |= set(E.marks[rs]) if rs else {P.start}
        sinks |= set(E.marks[rf]) if rf else {P.finish}
    pc = _paths_between(D, sources, sinks, lambda P: True, bud)
    cc = _circuit_candidates(D, E, w, bud)
    bit = {e: i for i, e in enumerate(D.edges)}
    pf = _disjoint_families(pc, len(S.verticals), bit, bud)
    cf = _disjoint_families(cc, len(F), bit, bud)
    ci = []
    for C in F:
        hit = [i for i, K in enumerate(cc) if _same_circuit(C, K)]
        ci.append(hit[0] if hit else -1)
    prefer = (tuple(sorted(ci)), _index_of(pc, S.verticals))
    best = _minimal_pair(cf, pf, prefer, bud)
    if best is None:
        raise InvalidInput("no routing keeps the path and circuit counts")
    _, _, icirc, ipath = best
    circs, paths = [cc[i] for i in icirc], [pc[i] for i in ipath]
    model, emb, (c2, p2) = _finalize(E, [circs, paths])
    out = RoutedSystem(emb, c2, p2)
    r = Report()
    r.extend(model.verify(D, out.host), "model-")
    r.extend(validate_routed_system(out), "system-")
    if r.ok:
        try:
            _orientation(emb, c2)
        except InvalidInput as exc:
            r.add("orientation", str(exc))
        r.extend(cylinder_property(emb, c2, p2))
    if not r.ok:
        raise RerouteFailed(r)
    return model, out

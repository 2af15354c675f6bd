"""Cylindrical grids out of nested circuits plus in- and out-paths.

The pipeline: trim and (if needed) reroute the input, split the paths at
the middle circuit, decide whether the outer parts are disjoint or
intersecting, and build ``n`` circuits and ``2n`` spokes inside a band of
``3n-1`` circuits.  The closing step keeps only the proposed circuits and
spokes, contracts shared and transit edges, and reads off the grid; the
resulting model is verified against the generated grid before it is returned.
"""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from ..digraph import Digraph, DirectedPath, path_from_edges
from ..embedding import RotationEmbedding, winding
from ..errors import Budget, DirgridError, Exhausted, InvalidInput
from ..minors import CylGridWitness, MinorModel, butterfly_contract, generate_cylindrical_grid, validate_grid_witness
from ..rerouting import RoutedSystem, contract_union, cylinder_property, reroute_cylinder
from .acyclic import GridExtraction, bubble_paths, diagonal
from .config import PipelineConfig
from .cuts import crossing_signs, inside_vertices

BRANCHES = ("a", "b", "c", "d")


class NotAssembled(Exhausted):
    """Every branch was tried and none produced a verified grid.

    Like budget exhaustion this claims nothing about existence.
    """

    def __init__(self, why: str, spent: int | None = None):
        DirgridError.__init__(self, f"assemble: {why} after {spent} search steps")
        self.what, self.spent = "assemble", spent


def band_size(n: int, cfg: PipelineConfig | None = None) -> int:
    """Circuits needed in the band where the grid is built (``3n-1`` by default)."""
    cfg = cfg or PipelineConfig()
    return cfg.required("closure_factor", n) - 1


def required_size(n: int, cfg: PipelineConfig | None = None) -> int:
    """Fewest input circuits for which a band fits strictly outside the middle circuit."""
    return 2 * band_size(n, cfg) + 1


def grid_parts(W: CylGridWitness) -> tuple[tuple[DirectedPath, ...], tuple[DirectedPath, ...], tuple[DirectedPath, ...]]:
    """Circuits, in-paths and out-paths of a generated cylindrical grid."""
    m = W.n
    outs, ins = [], []
    for j in range(1, 2 * m + 1):
        col = [W.vertex(i, j) for i in range(1, m + 1)]
        es = [W.spokes[(i, j)] for i in range(1, m)]
        if j <= m:
            outs.append(DirectedPath(tuple(col), tuple(es)))
        else:
            ins.append(DirectedPath(tuple(col[::-1]), tuple(es[::-1])))
    return tuple(W.circuits), tuple(ins), tuple(outs)


# ---------------------------------------------------------------------------
# small path helpers


def circuit_arc(C: DirectedPath, x: int, y: int) -> DirectedPath:
    """The sub-path of circuit ``C`` from ``x`` forward to ``y``."""
    k = len(C.edges)
    i, j = C.vertices.index(x), C.vertices.index(y)
    vs, es = [x], []
    while i != j:
        es.append(C.edges[i])
        i = (i + 1) % k
        vs.append(C.vertices[i])
    return DirectedPath(tuple(vs), tuple(es))


def trim(P: DirectedPath, first, last) -> DirectedPath | None:
    """Shortest tail of the prefix of ``P`` up to its first ``last`` vertex that starts in ``first``."""
    b = next((k for k, v in enumerate(P.vertices) if v in last), None)
    if b is None:
        return None
    a = max((k for k in range(b + 1) if P.vertices[k] in first), default=None)
    return None if a is None else P.subpath(a, b)


def outer_part(P: DirectedPath, mid, inward: bool) -> DirectedPath | None:
    """Part of ``P`` on the far side of the middle circuit.

    In-paths (``inward``) keep their start up to the first middle vertex;
    out-paths keep their end from the last middle vertex.
    """
    hits = [k for k, v in enumerate(P.vertices) if v in mid]
    if not hits:
        return None
    return P.subpath(0, hits[0]) if inward else P.subpath(hits[-1], len(P.vertices) - 1)


def inner_part(P: DirectedPath, mid, inward: bool) -> DirectedPath | None:
    hits = [k for k, v in enumerate(P.vertices) if v in mid]
    if not hits:
        return None
    return P.subpath(hits[-1], len(P.vertices) - 1) if inward else P.subpath(0, hits[0])


def union_digraph(D: Digraph, paths: Sequence[DirectedPath]) -> Digraph:
    vs = sorted({v for P in paths for v in P.vertices})
    es = sorted({e for P in paths for e in P.edges})
    return D.subgraph(vs, es)


# ---------------------------------------------------------------------------
# closing up: circuits + spokes -> verified cylindrical grid


def _rebuild(cur: Digraph, P: DirectedPath, gone: int, alias) -> DirectedPath:
    es = [f for f in P.edges if f != gone]
    if not es:
        return DirectedPath((alias(P.start),), ())
    return path_from_edges(cur, es)


def close_cylinder(D: Digraph, circuits: Sequence[DirectedPath], outs: Sequence[DirectedPath], ins: Sequence[DirectedPath], branch: str, pre: tuple = ()):
    """Turn ``n`` nested circuits (innermost first), ``n`` out- and ``n`` in-paths
    crossing all of them into a verified cylindrical grid of size ``n``.

    ``pre`` is a script already applied to the original host to obtain ``D``.
    Returns ``None`` when the proposal does not close up into a grid.
    """
    n = len(circuits)
    if len(outs) != n or len(ins) != n:
        return None
    inner, outer = circuits[0].vertex_set(), circuits[-1].vertex_set()
    outs = [trim(P, inner, outer) for P in outs]
    ins = [trim(P, outer, inner) for P in ins]
    if any(P is None for P in outs + ins):
        return None
    try:
        model, cur, _, (cs, os_, is_) = contract_union(D, [circuits, outs, ins])
    except InvalidInput:
        return None
    script = list(pre) + list(model.script)
    groups = [list(cs), list(os_), list(is_)]
    ring = set().union(*(C.vertex_set() for C in groups[0]))
    protected = {v for P in groups[1] + groups[2] for v in P.vertices if v in ring}
    protected |= {x for P in groups[1] + groups[2] for x in (P.start, P.finish)}
    alias: dict[int, int] = {}

    def find(v):
        while v in alias:
            v = alias[v]
        return v

    changed = True
    while changed:
        changed = False
        for v in cur.vertices:
            if v in protected or cur.in_degree(v) != 1 or cur.out_degree(v) != 1:
                continue
            e = cur.in_edges(v)[0]
            if cur.tail(e) == v:
                continue
            alias[v] = cur.tail(e)
            cur = butterfly_contract(cur, e)
            script.append(("contract", e))
            groups = [[_rebuild(cur, P, e, find) for P in g] for g in groups]
            changed = True
            break
    cs, os_, is_ = groups
    if len(cur) != 2 * n * n or cur.num_edges() != 2 * n * n + 2 * n * (n - 1):
        return None
    # columns in the order the innermost circuit meets them
    label = {}
    for j, P in enumerate(os_):
        for v in P.vertices:
            label.setdefault(v, ("out", j))
    for j, P in enumerate(is_):
        for v in P.vertices:
            label.setdefault(v, ("in", j))
    C1 = cs[0].vertices[:-1]
    if len(C1) != 2 * n or any(v not in label for v in C1):
        return None
    kinds = [label[v][0] for v in C1]
    start = next((s for s in range(2 * n) if all(kinds[(s + t) % (2 * n)] == ("out" if t < n else "in") for t in range(2 * n))), None)
    if start is None:
        return None
    cols = [label[C1[(start + t) % (2 * n)]] for t in range(2 * n)]
    col_path = [os_[j] if kind == "out" else is_[j] for kind, j in cols]
    rings = []
    for C in cs:
        cyc = C.vertices[:-1]
        if len(cyc) != 2 * n:
            return None
        hit = [next((v for v in cyc if v in P.vertex_set()), None) for P in col_path]
        if None in hit or len(set(hit)) != 2 * n:
            return None
        k = cyc.index(hit[0])
        vs = tuple(cyc[k:] + cyc[:k])
        if list(vs) != hit:
            return None
        es = tuple(cur.edges_between(vs[t], vs[(t + 1) % (2 * n)])[0] for t in range(2 * n))
        rings.append(DirectedPath(vs + (vs[0],), es))
    spokes = {}
    for i in range(1, n):
        for j in range(1, 2 * n + 1):
            a, b = rings[i - 1].vertices[j - 1], rings[i].vertices[j - 1]
            t, h = (a, b) if j <= n else (b, a)
            cand = [e for e in cur.edges_between(t, h) if e in col_path[j - 1].edges]
            if not cand:
                return None
            spokes[(i, j)] = cand[0]
    W = CylGridWitness(n, tuple(rings), spokes)
    if not validate_grid_witness(cur, W).ok:
        return None
    vmap = {rings[i].vertices[j]: i * 2 * n + j for i in range(n) for j in range(2 * n)}
    full = MinorModel(tuple(script), vmap)
    return GridExtraction(full, cur, W, branch)


# ---------------------------------------------------------------------------
# the band construction


def _interval(C: DirectedPath, P: DirectedPath) -> set[int] | None:
    """Positions on ``C`` from the last to the first vertex ``P`` shares with it."""
    cyc = C.vertices[:-1]
    pos = {v: k for k, v in enumerate(cyc)}
    shared = [v for v in P.vertices if v in pos]
    if not shared:
        return None
    a, b = pos[shared[-1]], pos[shared[0]]
    out = {a}
    while a != b:
        a = (a + 1) % len(cyc)
        out.add(a)
    return out


def partition_band(band: Sequence[DirectedPath], ins: Sequence[DirectedPath], outs: Sequence[DirectedPath]):
    """Split every band circuit into an in-arc and an out-arc.

    Paths are discarded, highest index first, until on every circuit the
    in-intervals and out-intervals occupy two complementary blocks.  Returns
    ``(kept_in, kept_out, arcs)`` with ``arcs[k] = (I_k, O_k)``.
    """
    keep_in, keep_out = list(range(len(ins))), list(range(len(outs)))
    while True:
        bad = None
        ivs = {}
        for k, C in enumerate(band):
            for kind, fam, keep in (("in", ins, keep_in), ("out", outs, keep_out)):
                for i in keep:
                    iv = _interval(C, fam[i])
                    if iv is None:
                        bad = (kind, i)
                        break
                    ivs[(k, kind, i)] = iv
                if bad:
                    break
            if bad:
                break
            bad = _block_violation(len(C.vertices) - 1, {key[1:]: iv for key, iv in ivs.items() if key[0] == k})
            if bad:
                break
        if bad is None:
            break
        kind, i = bad
        (keep_in if kind == "in" else keep_out).remove(i)
        if not keep_in or not keep_out:
            return [], [], []
    arcs = []
    for k, C in enumerate(band):
        cyc = C.vertices[:-1]
        owner = {}
        for kind, keep in (("in", keep_in), ("out", keep_out)):
            for i in keep:
                for p in ivs[(k, kind, i)]:
                    owner[p] = kind
        blocks = {}
        for kind in ("in", "out"):
            # walk from a position of the other kind to the next one
            other = next(p for p in range(len(cyc)) if owner.get(p) not in (None, kind))
            mine = [q % len(cyc) for q in range(other + 1, other + len(cyc)) if owner.get(q % len(cyc)) is not None]
            run = []
            for q in mine:
                if owner[q] != kind:
                    if run:
                        break
                    continue
                run.append(q)
            blocks[kind] = circuit_arc(C, cyc[run[0]], cyc[run[-1]])
        arcs.append((blocks["in"], blocks["out"]))
    return keep_in, keep_out, arcs


def _block_violation(size: int, ivs: dict) -> tuple[str, int] | None:
    """First path (highest index) whose interval breaks the two-block pattern."""
    owner: dict[int, tuple[str, int]] = {}
    for (kind, i), iv in sorted(ivs.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for p in iv:
            if p in owner and owner[p][0] != kind:
                return max(owner[p], (kind, i), key=lambda x: x[1])
            owner[p] = (kind, i)
    seq = [owner[p][0] for p in range(size) if p in owner]
    changes = sum(seq[t] != seq[t - 1] for t in range(len(seq)))
    if changes <= 2:
        return None
    # drop the highest-indexed path of the smaller kind that starts a stray run
    runs = []
    for p in range(size):
        if p in owner and (not runs or runs[-1][0] != owner[p][0] or p - runs[-1][2] > 0 and owner.get(p - 1, ("", 0))[0] != owner[p][0]):
            runs.append([owner[p][0], set(), p])
        if p in owner:
            runs[-1][1].add(owner[p][1])
            runs[-1][2] = p
    by_kind = {"in": [r for r in runs if r[0] == "in"], "out": [r for r in runs if r[0] == "out"]}
    kind = min(("in", "out"), key=lambda k: (sum(len(r[1]) for r in by_kind[k]), k))
    stray = min(by_kind[kind], key=lambda r: len(r[1]))
    return kind, max(stray[1])


def _order_along(H: DirectedPath, paths: Sequence[DirectedPath]) -> list[DirectedPath]:
    pos = {v: k for k, v in enumerate(H.vertices)}

    def first(P):
        return min((pos[v] for v in P.vertices if v in pos), default=len(pos))

    return sorted(paths, key=first)


def band_grid(D: Digraph, band: Sequence[DirectedPath], ins: Sequence[DirectedPath], outs: Sequence[DirectedPath], n: int, label: str, bud: Budget, pre: tuple = ()):
    """Grid built inside ``band`` (circuits innermost first) from in- and out-parts
    crossing it."""
    L = len(band)
    keep_in, keep_out, arcs = partition_band(band, ins, outs)
    if len(keep_in) < L or len(keep_out) < L:
        return None
    vin = [ins[i] for i in keep_in]
    vout = [outs[i] for i in keep_out]
    hs_in = [arcs[k][0] for k in reversed(range(L))]
    hs_out = [arcs[k][1] for k in range(L)]
    sides = []
    for hs, vs in ((hs_in, vin), (hs_out, vout)):
        U = union_digraph(D, list(hs) + list(vs))
        left_to_right = _order_along(hs[0], vs)[::-1]
        found = bubble_paths(U, hs, left_to_right, L, bud)
        if found is None:
            return None
        sides.append(found)
    (_, hI, vI), (_, hO, vO) = sides
    # plain case: whole band circuits with the first n spokes of each kind
    g = close_cylinder(D, list(band[:n]), list(vO[:n]), list(vI[:n]), f"{label}-plain", pre)
    if g is not None:
        return g
    # bubbling case: staircases, shifting in on the in side and out on the out side
    level_in = {k: L - 1 - k for k in range(L)}  # in-level -> band index
    rings = []
    for r in range(n):
        rr = n - 1 - r
        wi = diagonal(hI, vI[:n], 2 * r)
        wo = diagonal(hO, vO[:n], 2 * rr)
        if wi is None or wo is None:
            return None
        b_end = band[level_in[2 * r + n]]
        b_start = band[level_in[2 * r]]
        try:
            ring = wi.concat(circuit_arc(b_end, wi.finish, wo.start)).concat(wo).concat(circuit_arc(b_start, wo.finish, wi.start))
        except (InvalidInput, ValueError):
            return None
        if len(set(ring.vertices[:-1])) != len(ring.vertices) - 1:
            return None
        rings.append(ring)
    rings.reverse()  # innermost first
    return close_cylinder(D, rings, list(vO[:n]), list(vI[:n]), f"{label}-reroute", pre)


# ---------------------------------------------------------------------------
# outer parts: Ramsey split and deviants


def _biclique(rel, na: int, nb: int, target: int, bud: Budget):
    """Largest-first search for A, B with ``rel(a, b)`` for all pairs, both of size >= target."""
    if all(rel(a, b) for a in range(na) for b in range(nb)):
        return list(range(na)), list(range(nb))
    for size in range(na, target - 1, -1):
        for A in combinations(range(na), size):
            bud.tick()
            B = [b for b in range(nb) if all(rel(a, b) for a in A)]
            if len(B) >= target:
                return list(A), B
    return None


def deviant_counts(E: RotationEmbedding, ins, outs, ins_outer, outs_outer, CN: DirectedPath) -> tuple[int, int] | None:
    """How many in- and out-paths leave the curve ``p`` and come back round the hole.

    ``p`` runs along the middle in-path until it meets the middle out-path's
    outer part and then along that part to its end.
    """
    cyc = CN.vertices[:-1]
    pos = {v: k for k, v in enumerate(cyc)}
    mi = sorted(range(len(ins)), key=lambda i: pos.get(ins[i].start, 0))[len(ins) // 2]
    mo = sorted(range(len(outs)), key=lambda i: pos.get(outs[i].finish, 0))[len(outs) // 2]
    Pi, Po = ins_outer[mi], outs_outer[mo]
    k = next((t for t, v in enumerate(Pi.vertices) if v in Po.vertex_set()), None)
    if k is None:
        return None
    v = Pi.vertices[k]
    p_edges = list(Pi.edges[:k]) + list(Po.edges[Po.position(v):])
    p_vs = list(Pi.vertices[: k + 1]) + list(Po.vertices[Po.position(v) + 1 :])
    if len(set(p_vs)) != len(p_vs):
        return None
    on_p = {x: t for t, x in enumerate(p_vs)}
    sign = crossing_signs(E)

    def deviant(P):
        hits = [t for t, x in enumerate(P.vertices) if x in on_p]
        for a, b in zip(hits, hits[1:]):
            if b == a + 1 and P.edges[a] in p_edges:
                continue
            w = sum(sign.get(e, 0) for e in P.edges[a:b])
            x, y = on_p[P.vertices[a]], on_p[P.vertices[b]]
            # close up along p from the return point back to the departure point
            if y <= x:
                w += sum(sign.get(e, 0) for e in p_edges[y:x])
            else:
                w -= sum(sign.get(e, 0) for e in p_edges[x:y])
            if w % 2:
                return True
        return False

    return sum(deviant(P) for P in ins), sum(deviant(P) for P in outs)


def _case(dev_in: int, n_in: int, dev_out: int, n_out: int) -> str:
    ok_in, ok_out = 2 * dev_in <= n_in, 2 * dev_out <= n_out
    if ok_in and ok_out:
        return "b"
    if not ok_in and not ok_out:
        return "c"
    return "d"


# ---------------------------------------------------------------------------
# entry point


def _check_inputs(E: RotationEmbedding, circuits, ins, outs):
    for k, C in enumerate(circuits):
        if not C.is_circuit or not C.check(E.host).ok:
            raise InvalidInput(f"circuit {k} is not a directed circuit of the host")
        if winding(E, C.edges) != 1:
            raise InvalidInput(f"circuit {k} is not counterclockwise around the hole")
    for a, b in combinations(range(len(circuits)), 2):
        if circuits[a].vertex_set() & circuits[b].vertex_set():
            raise InvalidInput(f"circuits {a} and {b} share a vertex")
    for k in range(len(circuits) - 1):
        if not circuits[k].vertex_set() <= inside_vertices(E, circuits[k + 1].edges):
            raise InvalidInput(f"circuit {k} is not nested inside circuit {k + 1}")
    inner, outer = circuits[0].vertex_set(), circuits[-1].vertex_set()
    for name, fam, a, b in (("in", ins, outer, inner), ("out", outs, inner, outer)):
        used: set[int] = set()
        for k, P in enumerate(fam):
            if not P.check(E.host).ok or P.is_circuit:
                raise InvalidInput(f"{name}-path {k} is not a directed path of the host")
            if P.start not in a or P.finish not in b:
                raise InvalidInput(f"{name}-path {k} has the wrong ends")
            if used & P.vertex_set():
                raise InvalidInput(f"{name}-paths are not disjoint")
            used |= P.vertex_set()


def assemble_cylindrical_grid(
    E: RotationEmbedding,
    circuits: Sequence[DirectedPath],
    in_paths: Sequence[DirectedPath],
    out_paths: Sequence[DirectedPath],
    n: int,
    budget: int | Budget | None = None,
    cfg: PipelineConfig | None = None,
) -> GridExtraction:
    """Cylindrical grid of size ``n`` as a verified butterfly minor of ``E.host``.

    ``circuits`` are nested counterclockwise, innermost first; in-paths run
    from the outermost circuit to the innermost, out-paths the other way.
    """
    cfg = cfg or PipelineConfig()
    if n < 1:
        raise InvalidInput("n must be positive")
    if E.mode != "cylinder":
        raise InvalidInput("needs a cylinder embedding")
    circuits, ins, outs = tuple(circuits), tuple(in_paths), tuple(out_paths)
    N, L = len(circuits), band_size(n, cfg)
    if N < required_size(n, cfg):
        raise InvalidInput(f"need at least {required_size(n, cfg)} circuits for size {n}, got {N}")
    if len(ins) < L or len(outs) < L:
        raise InvalidInput(f"need at least {L} in-paths and {L} out-paths")
    _check_inputs(E, circuits, ins, outs)
    bud = Budget.of(budget if budget is not None else cfg.search_budget, "assemble")
    D0 = E.host
    inner, outer = circuits[0].vertex_set(), circuits[-1].vertex_set()
    ins = tuple(trim(P, outer, inner) for P in ins)
    outs = tuple(trim(P, inner, outer) for P in outs)

    pre: tuple = ()
    D = D0
    if not cylinder_property(E, circuits, ins + outs).ok:
        model, S = reroute_cylinder(RoutedSystem(E, circuits, ins + outs), budget=bud)
        pre, D, E = model.script, S.host, S.embedding
        circuits = tuple(sorted(S.horizontals, key=lambda C: len(inside_vertices(E, C.edges))))
        inner, outer = circuits[0].vertex_set(), circuits[-1].vertex_set()
        ins = tuple(P for P in S.verticals if P.start in outer)
        outs = tuple(P for P in S.verticals if P.start in inner)
        if len(ins) < L or len(outs) < L:
            raise NotAssembled("rerouting lost paths", bud.spent)

    pattern = generate_cylindrical_grid(n)[0]
    mid = N // 2 - 1  # index of C_{N/2}
    midset = circuits[mid].vertex_set()
    oi = [outer_part(P, midset, True) for P in ins]
    oo = [outer_part(P, midset, False) for P in outs]
    if None in oi or None in oo:
        raise InvalidInput("a path misses the middle circuit")

    def disjoint(a, b):
        return not (oi[a].vertex_set() & oo[b].vertex_set())

    attempts = []
    split = _biclique(disjoint, len(ins), len(outs), L, bud)
    if split is not None:
        A, B = split
        band = circuits[mid + 1 : mid + 1 + L]
        attempts.append(("a", band, [oi[a] for a in A], [oo[b] for b in B]))
    split = _biclique(lambda a, b: not disjoint(a, b), len(ins), len(outs), L, bud)
    if split is not None and mid - L >= 1:
        A, B = split
        counts = deviant_counts(E, [ins[a] for a in A], [outs[b] for b in B], [oi[a] for a in A], [oo[b] for b in B], circuits[-1])
        case = "b" if counts is None else _case(counts[0], len(A), counts[1], len(B))
        band = circuits[mid - L : mid]
        ii = [inner_part(ins[a], midset, True) for a in A]
        io = [inner_part(outs[b], midset, False) for b in B]
        attempts.append((case, band, ii, io))
    for label, band, pi, po in attempts:
        g = band_grid(D, band, pi, po, n, label, bud, pre)
        if g is None:
            continue
        rep = g.model.verify(D0, pattern)
        if rep.ok and g.model.replay(D0).key() == g.host.key():
            return g
    raise NotAssembled("no branch closed up into a grid", bud.spent)

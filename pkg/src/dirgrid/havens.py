"""Haven certificates: checking, exhaustive search, and the constructions
that transfer havens through representations and intersecting families.

A certificate is an explicit table ``Z -> representative`` over every vertex
set ``Z`` with ``|Z| < order``; the named haven value is the strong component
of ``D - Z`` containing the representative.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph, EulerMultiplicity, bidirected, component_of, eulerianize, strong_components
from .errors import Budget, Exhausted, InvalidInput, Report


def small_subsets(vertices: Sequence[int], below: int):
    """All subsets of size ``< below``, by size then lexicographically."""
    for r in range(min(below, len(vertices) + 1)):
        for Z in combinations(sorted(vertices), r):
            yield frozenset(Z)


@dataclass(frozen=True)
class HavenCertificate:
    order: int
    table: Mapping[frozenset, int]

    def rep(self, Z: Iterable[int]) -> int:
        return self.table[frozenset(Z)]

    def component(self, D: Digraph, Z: Iterable[int]) -> frozenset[int]:
        Z = frozenset(Z)
        return component_of(D.delete_vertices(Z), self.table[Z])

    def __call__(self, D: Digraph, Z: Iterable[int]) -> frozenset[int]:
        return self.component(D, Z)

    def canonical(self, D: Digraph) -> "HavenCertificate":
        """Same haven with every representative replaced by its component's minimum."""
        return HavenCertificate(self.order, {Z: min(self.component(D, Z)) for Z in self.table})

    def lines(self) -> list[str]:
        rows = sorted(self.table.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
        out = [f"order: {self.order}"]
        for Z, r in rows:
            zs = " ".join(str(v) for v in sorted(Z))
            out.append(f"Z: {zs} -> {r}" if zs else f"Z: -> {r}")
        return out


def parse_certificate(text: str) -> HavenCertificate:
    order = None
    table: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("order:"):
            order = int(line.split(":", 1)[1])
        elif line.startswith("Z:"):
            body = line[2:]
            if "->" not in body:
                raise InvalidInput(f"line {lineno}: missing '->'")
            zs, rep = body.split("->")
            Z = frozenset(int(t) for t in zs.split())
            if Z in table:
                raise InvalidInput(f"line {lineno}: duplicate entry")
            table[Z] = int(rep)
        else:
            raise InvalidInput(f"line {lineno}: unrecognised certificate line")
    if order is None:
        raise InvalidInput("certificate has no 'order:' header")
    return HavenCertificate(order, table)


def check_haven(D: Digraph, cert: HavenCertificate, all_pairs: bool = False) -> Report:
    """Validate a certificate against the haven axiom.

    By default only cover pairs ``Z - {z} ⊆ Z`` are compared; containment is
    transitive, so this is equivalent to comparing every nested pair, which
    ``all_pairs=True`` does directly.
    """
    rep = Report()
    expected = set(small_subsets(D.vertices, cert.order))
    for Z in sorted(expected - set(cert.table), key=lambda z: (len(z), sorted(z))):
        rep.add("missing", f"no entry for Z={sorted(Z)}")
    for Z in sorted(set(cert.table) - expected, key=lambda z: (len(z), sorted(z))):
        rep.add("extraneous", f"unexpected entry Z={sorted(Z)}")
    if not rep.ok:
        return rep
    comp: dict[frozenset, frozenset] = {}
    for Z, r in cert.table.items():
        if r not in D or r in Z:
            rep.add("component", f"representative {r} is not a vertex of D-{sorted(Z)}")
            continue
        comp[Z] = component_of(D.delete_vertices(Z), r)
    if not rep.ok:
        return rep
    for Z in sorted(cert.table, key=lambda z: (len(z), sorted(z))):
        if all_pairs:
            parents = (frozenset(P) for r in range(len(Z)) for P in combinations(sorted(Z), r))
        else:
            parents = (Z - {z} for z in sorted(Z))
        for P in parents:
            if not comp[Z] <= comp[P]:
                rep.add("axiom", f"B({sorted(Z)}) not inside B({sorted(P)})")
    return rep


# ---------------------------------------------------------------------------
# exhaustive search


def find_haven(D: Digraph, w: int, budget: int | Budget | None = None) -> HavenCertificate | None:
    """A haven of order exactly ``w`` or ``None``; raises :class:`Exhausted` on budget."""
    bud = Budget.of(budget, "haven search")
    if w <= 0:
        return HavenCertificate(0, {})
    if w > len(D):
        return None
    Zs = list(small_subsets(D.vertices, w))
    pos = {Z: i for i, Z in enumerate(Zs)}
    comps: dict[frozenset, list[frozenset]] = {}

    def components(Z):
        c = comps.get(Z)
        if c is None:
            c = comps[Z] = strong_components(D.delete_vertices(Z))
        return c

    children: dict[frozenset, list[frozenset]] = {Z: [] for Z in Zs}
    for Z in Zs:
        for z in Z:
            children[Z - {z}].append(Z)
    chosen: dict[frozenset, frozenset] = {}
    allv = frozenset(D.vertices)

    def allowed(Z):
        acc = allv
        for z in Z:
            P = Z - {z}
            if P in chosen:
                acc = acc & chosen[P]
        return acc

    def viable(Z):
        a = allowed(Z)
        return any(c <= a for c in components(Z))

    def solve(i):
        if i == len(Zs):
            return True
        Z = Zs[i]
        a = allowed(Z)
        for c in components(Z):
            if not c <= a:
                continue
            bud.tick()
            chosen[Z] = c
            if all(viable(C) for C in children[Z]) and solve(i + 1):
                return True
            del chosen[Z]
        return False

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * len(Zs) + 1000))
    try:
        if not solve(0):
            return None
    finally:
        sys.setrecursionlimit(old)
    return HavenCertificate(w, {Z: min(c) for Z, c in chosen.items()})


def haven_order(D: Digraph, cap: int, budget: int | Budget | None = None) -> tuple[int, HavenCertificate]:
    """Largest ``w <= cap`` with a haven of order ``w``, plus a witness.

    Orders are tried from ``cap`` downwards; because havens restrict to every
    smaller order, the first success is the maximum.
    """
    if cap < 0:
        raise InvalidInput("cap must be non-negative")
    bud = Budget.of(budget, "haven_order")
    for w in range(min(cap, len(D)), 0, -1):
        cert = find_haven(D, w, bud)
        if cert is not None:
            return w, cert
    return 0, HavenCertificate(0, {})


def restrict(cert: HavenCertificate, w: int) -> HavenCertificate:
    if w > cert.order:
        raise InvalidInput("cannot raise the order of a haven")
    return HavenCertificate(w, {Z: r for Z, r in cert.table.items() if len(Z) < w})


def lift_certificate(D: Digraph, sub: Digraph, cert: HavenCertificate) -> HavenCertificate:
    """Haven of ``D`` induced by a haven of a subdigraph ``sub``.

    ``B(Z)`` is the strong component of ``D - Z`` enclosing the sub-haven's
    value at ``Z ∩ V(sub)``.
    """
    table = {}
    for Z in small_subsets(D.vertices, cert.order):
        r = cert.table[Z & sub.vertex_set]
        table[Z] = min(component_of(D.delete_vertices(Z), r))
    return HavenCertificate(cert.order, table)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Representation:
    """Vertex-subdigraphs ``V[i] -> nu[i]`` and edge-subdigraphs ``E[j] -> eps[j]``."""

    host: Digraph
    V: tuple[Digraph, ...]
    E: tuple[Digraph, ...]
    nu: tuple[int, ...]
    eps: tuple[tuple[int, int], ...]

    def pattern(self) -> Digraph:
        """The pattern graph, bidirected."""
        return bidirected(self.nu, self.eps)

    def is_faithful(self) -> bool:
        for e, (u, v) in zip(self.E, self.eps):
            for Vm, x in zip(self.V, self.nu):
                if x not in (u, v) and e.vertex_set & Vm.vertex_set:
                    return False
        return True


def validate_representation(rep: Representation, require_faithful: bool = False) -> Report:
    r = Report()
    D = rep.host
    if len(rep.V) != len(rep.nu) or len(set(rep.nu)) != len(rep.nu):
        r.add("nu", "nu is not a bijection onto the pattern vertices")
    if len(rep.E) != len(rep.eps) or len({frozenset(p) for p in rep.eps}) != len(rep.eps):
        r.add("eps", "eps is not a bijection onto the pattern edges")
    for u, v in rep.eps:
        if u not in rep.nu or v not in rep.nu or u == v:
            r.add("eps", f"pattern edge {(u, v)} has an invalid end")
    for name, fam in (("V", rep.V), ("E", rep.E)):
        for i, H in enumerate(fam):
            if not H.vertex_set <= D.vertex_set or any(D.edges.get(e) != th for e, th in H.edges.items()):
                r.add("subdigraph", f"{name}[{i}] is not a subdigraph of the host")
            if not H.is_strongly_connected():
                r.add("strong", f"{name}[{i}] is not strongly connected")
        for i, j in combinations(range(len(fam)), 2):
            if fam[i].vertex_set & fam[j].vertex_set:
                r.add("disjoint", f"{name}[{i}] and {name}[{j}] share a vertex")
    for j, H in enumerate(rep.E):
        if H.num_edges() and H.is_strongly_connected() and eulerianize(H, 2) is None:
            r.add("eulerian", f"E[{j}] is not 2-eulerianizable")
    where = dict(zip(rep.nu, rep.V))
    for H, (u, v) in zip(rep.E, rep.eps):
        for x in (u, v):
            if x in where and not H.vertex_set & where[x].vertex_set:
                r.add("incidence", f"edge-subdigraph for {(u, v)} misses the subdigraph of {x}")
    if require_faithful and r.ok and not rep.is_faithful():
        r.add("faithful", "an edge-subdigraph meets a non-end vertex-subdigraph")
    return r


def haven_from_representation(rep: Representation, cert_G: HavenCertificate, h: int) -> HavenCertificate:
    """Haven of order ``h/2 + 1`` in the host from a haven of order ``h + 1`` in the pattern."""
    if h <= 0 or h % 2:
        raise InvalidInput("h must be a positive even integer")
    bad = validate_representation(rep, require_faithful=True)
    if not bad.ok:
        raise InvalidInput(f"representation is not faithful and valid: {bad}")
    G = rep.pattern()
    if cert_G.order < h + 1:
        raise InvalidInput(f"pattern haven has order {cert_G.order} < {h + 1}")
    if not check_haven(G, restrict(cert_G, h + 1)).ok:
        raise InvalidInput("pattern haven certificate is invalid")
    D = rep.host
    m: dict[int, frozenset] = {}
    for v in D.vertices:
        label: frozenset = frozenset()
        for H, (a, b) in zip(rep.E, rep.eps):
            if v in H:
                label = frozenset((a, b))
                break
        else:
            for H, x in zip(rep.V, rep.nu):
                if v in H:
                    label = frozenset((x,))
                    break
        m[v] = label
    anchor = {x: min(H.vertices) for H, x in zip(rep.V, rep.nu)}
    table = {}
    for X in small_subsets(D.vertices, h // 2 + 1):
        Y = frozenset().union(*(m[x] for x in X)) if X else frozenset()
        u = cert_G.table[Y]
        table[X] = min(component_of(D.delete_vertices(X), anchor[u]))
    return HavenCertificate(h // 2 + 1, table)


def union_digraph(parts: Iterable[Digraph]) -> Digraph:
    out = Digraph()
    for p in parts:
        out = out.union(p)
    return out


def haven_from_intersecting_family(D: Digraph, subs: Sequence[Digraph], n: int) -> tuple[Digraph, HavenCertificate]:
    """Haven of order ``n + 1`` on the union of pairwise-intersecting subdigraphs.

    Requires at least ``2n + 1`` strongly connected members with every vertex
    in at most two of them; any ``n`` vertices then miss some member.
    """
    if n < 0:
        raise InvalidInput("n must be non-negative")
    if len(subs) < 2 * n + 1:
        raise InvalidInput(f"count: need {2 * n + 1} subdigraphs, got {len(subs)}")
    for i, j in combinations(range(len(subs)), 2):
        if not subs[i].vertex_set & subs[j].vertex_set:
            raise InvalidInput(f"disjoint-pair: members {i} and {j} are disjoint")
    cover: dict[int, int] = {}
    for S in subs:
        if not S.is_strongly_connected():
            raise InvalidInput("member is not strongly connected")
        for v in S.vertices:
            cover[v] = cover.get(v, 0) + 1
    over = sorted(v for v, c in cover.items() if c > 2)
    if over:
        raise InvalidInput(f"3-covered: vertex {over[0]} lies in more than two members")
    Dp = union_digraph(subs)
    if not Dp.vertex_set <= D.vertex_set:
        raise InvalidInput("members are not subdigraphs of D")
    table = {}
    for X in small_subsets(Dp.vertices, n + 1):
        free = next(S for S in subs if not S.vertex_set & X)
        table[X] = min(component_of(Dp.delete_vertices(X), min(free.vertices)))
    return Dp, HavenCertificate(n + 1, table)


# ---------------------------------------------------------------------------
# reduction to an eulerianizable subdigraph


@dataclass(frozen=True)
class EulerianOutcome:
    subdigraph: Digraph
    multiplicity: EulerMultiplicity
    certificate: HavenCertificate
    route: str

    def verify(self, h: int) -> Report:
        r = Report()
        r.extend(self.multiplicity.check(self.subdigraph), "euler-")
        if self.multiplicity.bound > 5:
            r.add("bound", f"multiplicity bound {self.multiplicity.bound} > 5")
        if self.certificate.order < h + 1:
            r.add("order", f"haven order {self.certificate.order} < {h + 1}")
        r.extend(check_haven(self.subdigraph, self.certificate), "haven-")
        return r


@dataclass(frozen=True)
class CliqueOutcome:
    representation: Representation

    def verify(self, h: int = 0) -> Report:
        return validate_representation(self.representation)


def _simple_paths(D: Digraph, a: int, b: int, limit: int, max_len: int) -> list[list[int]]:
    """Up to ``limit`` simple a->b paths as edge lists, shortest first."""
    found: list[list[int]] = []
    frontier = [([a], [])]
    while frontier and len(found) < limit:
        nxt = []
        for vs, es in frontier:
            for e in D.out_edges(vs[-1]):
                w = D.head(e)
                if w == b:
                    found.append(es + [e])
                    if len(found) >= limit:
                        break
                elif w not in vs and len(es) + 1 < max_len:
                    nxt.append((vs + [w], es + [e]))
            if len(found) >= limit:
                break
        frontier = nxt
    return found


def connectors(D: Digraph, pairs: Iterable[tuple[int, int]], per_pair: int = 2, max_len: int = 8) -> list[Digraph]:
    """Unions of an a->b path with a b->a path, a few per pair, deduplicated."""
    out: list[Digraph] = []
    seen = set()
    for a, b in pairs:
        fw = _simple_paths(D, a, b, per_pair, max_len)
        bw = _simple_paths(D, b, a, per_pair, max_len)
        for p in fw:
            for q in bw:
                H = D.subgraph(
                    {a} | {D.head(e) for e in p} | {D.head(e) for e in q},
                    sorted(set(p) | set(q)),
                )
                if H.key() not in seen:
                    seen.add(H.key())
                    out.append(H)
    return out


def _intersecting_family(cands: Sequence[Digraph], size: int, bud: Budget) -> list[Digraph] | None:
    chosen: list[Digraph] = []
    cover: dict[int, int] = {}

    def grow(i):
        if len(chosen) == size:
            return True
        for j in range(i, len(cands)):
            H = cands[j]
            bud.tick()
            if any(cover.get(v, 0) >= 2 for v in H.vertices):
                continue
            if any(not (H.vertex_set & C.vertex_set) for C in chosen):
                continue
            chosen.append(H)
            for v in H.vertices:
                cover[v] = cover.get(v, 0) + 1
            if grow(j + 1):
                return True
            chosen.pop()
            for v in H.vertices:
                cover[v] -= 1
        return False

    return list(chosen) if grow(0) else None


def _simple_cycles(D: Digraph, max_len: int, limit: int) -> list[Digraph]:
    import networkx as nx

    G = nx.DiGraph()
    G.add_nodes_from(D.vertices)
    G.add_edges_from((t, h) for t, h in D.edges.values() if t != h)
    out = [D.subgraph([v], []) for v in D.vertices]
    for cyc in nx.simple_cycles(G, length_bound=max_len):
        if len(out) >= limit:
            break
        vs = list(cyc)
        es = [min(D.edges_between(vs[i], vs[(i + 1) % len(vs)])) for i in range(len(vs))]
        out.append(D.subgraph(vs, es))
    out.sort(key=lambda H: (len(H), H.vertices))
    return out


def _pairwise_disjoint_choice(options: Sequence[Sequence[Digraph]], bud: Budget) -> list[Digraph] | None:
    """One member per slot, pairwise vertex-disjoint, with forward checking."""
    chosen: list[Digraph] = []

    def go(i, used):
        if i == len(options):
            return True
        for H in options[i]:
            bud.tick()
            if H.vertex_set & used:
                continue
            nu = used | H.vertex_set
            if any(all(G.vertex_set & nu for G in options[k]) for k in range(i + 1, len(options))):
                continue
            chosen.append(H)
            if go(i + 1, nu):
                return True
            chosen.pop()
        return False

    return list(chosen) if go(0, frozenset()) else None


def find_clique_representation(D: Digraph, m: int, budget: int | Budget | None = None, max_len: int = 6) -> Representation | None:
    """Representation of ``K_m`` whose members are directed cycles or single vertices."""
    bud = Budget.of(budget, "clique representation")
    cycles = _simple_cycles(D, max_len, limit=5000)
    # the m-1 edge-subdigraphs at a vertex-subdigraph are disjoint, so each
    # needs its own vertex there
    vcands = [H for H in cycles if len(H) >= m - 1]
    pairs = list(combinations(range(m), 2))

    # vertex families in order: short cycles (and single vertices) first
    def vertex_families():
        stack = [(0, [], frozenset())]
        while stack:
            i, chosen, used = stack.pop()
            if len(chosen) == m:
                yield chosen
                continue
            for j in range(len(vcands) - 1, i - 1, -1):
                if not vcands[j].vertex_set & used:
                    stack.append((j + 1, chosen + [j], used | vcands[j].vertex_set))

    edge_cands = [H for H in cycles if H.num_edges() > 0]
    for Vidx in vertex_families():
        bud.tick()
        Vs = [vcands[i] for i in Vidx]
        per_pair = [
            [H for H in edge_cands if H.vertex_set & Vs[a].vertex_set and H.vertex_set & Vs[b].vertex_set]
            for a, b in pairs
        ]
        if any(not c for c in per_pair):
            continue
        picked = _pairwise_disjoint_choice(per_pair, bud)
        if picked is not None:
            rep = Representation(D, tuple(Vs), tuple(picked), tuple(range(m)), tuple(pairs))
            if validate_representation(rep).ok:
                return rep
    return None


def reduce_to_eulerian(
    D: Digraph,
    X: Iterable[int],
    h: int,
    budget: int | Budget | None = 100_000,
    clique_size: int | None = None,
    routes: Sequence[str] = ("intersecting", "direct", "clique"),
) -> EulerianOutcome | CliqueOutcome:
    """Eulerianizable subdigraph with a haven of order ``h + 1``, or a clique representation.

    Bounded exact searches stand in for the non-constructive thresholds:

    ``intersecting``
        ``2h + 1`` pairwise-intersecting connectors through ``X`` covering
        each vertex at most twice (4-eulerianizable union).
    ``direct``
        single connectors and unions of two, checked with ``eulerianize`` at
        bounds 4 and 5 and with the exhaustive haven search.
    ``clique``
        a representation of ``K_m`` (``m = clique_size``, default ``h + 2``)
        from disjoint directed cycles.

    Every returned witness has been re-verified.  Running out of budget
    raises :class:`Exhausted`.
    """
    from .linkages import is_linked_set

    X = sorted(set(X))
    bud = Budget.of(budget, "reduce_to_eulerian")
    if bud.limit is not None and bud.limit <= 0:
        raise Exhausted("reduce_to_eulerian", 0)
    if not is_linked_set(D, X).linked:
        raise InvalidInput("X is not a linked set")
    pairs = list(combinations(X, 2))
    cands = None
    for route in routes:
        if route in ("intersecting", "direct") and cands is None:
            cands = connectors(D, pairs)
        if route == "intersecting":
            fam = _intersecting_family(cands, 2 * h + 1, bud)
            if fam is not None:
                Dp, cert = haven_from_intersecting_family(D, fam, h)
                mult = eulerianize(Dp, 4)
                if mult is not None:
                    out = EulerianOutcome(Dp, mult, cert, route)
                    if out.verify(h).ok:
                        return out
        elif route == "direct":
            unions = list(cands) + [a.union(b) for a, b in combinations(cands, 2) if a.vertex_set & b.vertex_set]
            unions.sort(key=lambda H: (len(H), H.num_edges(), H.vertices))
            for H in unions:
                bud.tick()
                if len(H) < h + 1:
                    continue
                for k in (4, 5):
                    mult = eulerianize(H, k)
                    if mult is None:
                        continue
                    cert = find_haven(H, h + 1, bud)
                    if cert is not None:
                        out = EulerianOutcome(H, mult, cert, route)
                        if out.verify(h).ok:
                            return out
                    break
        elif route == "clique":
            rep = find_clique_representation(D, clique_size or h + 2, bud)
            if rep is not None:
                return CliqueOutcome(rep)
        else:
            raise InvalidInput(f"unknown route {route!r}")
    raise Exhausted("reduce_to_eulerian: no route produced a witness", bud.spent)

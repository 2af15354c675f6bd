"""Brute-force oracles, deliberately independent of the code they check."""
from itertools import combinations, permutations, product

from dirgrid.digraph import Digraph


def mutually_reachable(D: Digraph, u: int, v: int) -> bool:
    def reach(a, b):
        seen, stack = {a}, [a]
        while stack:
            x = stack.pop()
            for (t, h) in D.edges.values():
                if t == x and h not in seen:
                    seen.add(h)
                    stack.append(h)
        return b in seen

    return reach(u, v) and reach(v, u)


def simple_paths(D: Digraph, A, B):
    """All simple directed paths (as vertex tuples) meeting A only at the start and B only at the end."""
    A, B = set(A), set(B)
    out = []
    succ = {v: sorted({h for (t, h) in D.edges.values() if t == v}) for v in D.vertices}

    def walk(path):
        v = path[-1]
        if v in B:
            out.append(tuple(path))
            return
        for w in succ[v]:
            if w in path or w in A:
                continue
            walk(path + [w])

    for a in sorted(A):
        walk([a])
    return out


def max_disjoint_paths_brute(D: Digraph, A, B, cap: int) -> int:
    paths = simple_paths(D, A, B)
    best = 0

    def grow(i, used, count):
        nonlocal best
        best = max(best, count)
        if best >= cap:
            return
        for j in range(i, len(paths)):
            vs = set(paths[j])
            if not vs & used:
                grow(j + 1, used | vs, count + 1)
                if best >= cap:
                    return

    grow(0, set(), 0)
    return best


def has_cycle(D: Digraph) -> bool:
    n = len(D)
    order = list(D.vertices)
    # a digraph is acyclic iff some vertex ordering puts every edge forward
    for perm in permutations(order):
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[t] < pos[h] for (t, h) in D.edges.values()):
            return False
    return True


def components_brute(D: Digraph, removed):
    """Strong components of D - removed, by mutual reachability."""
    rest = [v for v in D.vertices if v not in removed]
    sub = D.delete_vertices(removed)
    comps = []
    for v in rest:
        if any(v in c for c in comps):
            continue
        comps.append(frozenset(u for u in rest if u == v or mutually_reachable(sub, u, v)))
    return comps


def haven_exists_brute(D: Digraph, w: int) -> bool:
    """Enumerate every candidate table and test the axiom on all nested pairs."""
    if w == 0:
        return True
    Zs = [frozenset(Z) for r in range(w) for Z in combinations(D.vertices, r)]
    if any(len(Z) >= len(D) for Z in Zs):
        return False
    choices = [components_brute(D, Z) for Z in Zs]
    B = {}

    # plain depth-first enumeration; a partial table is abandoned as soon as
    # some nested pair among the assigned entries fails
    def extend(i):
        if i == len(Zs):
            return True
        Z = Zs[i]
        for c in choices[i]:
            if all(c <= B[P] for P in B if P <= Z):
                B[Z] = c
                if extend(i + 1):
                    return True
                del B[Z]
        return False

    return extend(0)


def relation_brute(f: dict, g: dict) -> str:
    """Agree/Cross/Neither by trying every pair of orders on A and B."""
    A, B = sorted(f), sorted(g)
    agree = cross = False
    for oa in permutations(A):
        for ob in permutations(B):
            pb = {b: i for i, b in enumerate(ob)}
            pa = {a: i for i, a in enumerate(oa)}
            finc = all(pb[f[x]] < pb[f[y]] for x, y in combinations(oa, 2))
            fdec = all(pb[f[x]] > pb[f[y]] for x, y in combinations(oa, 2))
            ginc = all(pa[g[x]] < pa[g[y]] for x, y in combinations(ob, 2))
            gdec = all(pa[g[x]] > pa[g[y]] for x, y in combinations(ob, 2))
            agree |= finc and ginc
            cross |= (finc and gdec) or (fdec and ginc)
    if agree:
        return "Agree"
    return "Cross" if cross else "Neither"


def min_union_brute(vcands, hcands, kv: int, kh: int):
    """Smallest edge union over kv disjoint verticals and kh disjoint horizontals.

    Candidates are ``(vertex_set, edge_set)`` pairs.
    """
    def families(cands, k):
        for combo in combinations(cands, k):
            vs = [c[0] for c in combo]
            if all(not (a & b) for a, b in combinations(vs, 2)):
                yield frozenset().union(*(c[1] for c in combo))

    hf = list(families(hcands, kh))
    best = None
    for ve in families(vcands, kv):
        for he in hf:
            n = len(ve | he)
            if best is None or n < best:
                best = n
    return best

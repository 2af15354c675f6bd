"""Annulus instances: concentric ccw rings plus hand-routed in- and out-paths.

A point ``(r, c)`` sits at radius ``r`` and angle ``2*pi*c/C``; integer
points are ring vertices.  Routes are point lists; consecutive points are
joined by straight edges, reusing a ring edge when two neighbouring points
of one ring are joined.
"""
from __future__ import annotations

import math

from dirgrid.digraph import Digraph, DirectedPath
from dirgrid.embedding import embedding_from_coordinates


def annulus(N: int, C: int, in_routes, out_routes):
    pts: dict = {}
    for k in range(1, N + 1):
        for c in range(C):
            pts[(k, c)] = len(pts)
    norm = lambda p: (p[0], p[1] % C)
    for route in list(in_routes) + list(out_routes):
        for p in route:
            pts.setdefault(norm(p), len(pts))
    arcs: dict = {}
    for k in range(1, N + 1):
        for c in range(C):
            arcs[(pts[(k, c)], pts[(k, (c + 1) % C)])] = len(arcs)

    def path(route):
        vs = [pts[norm(p)] for p in route]
        es = []
        for a, b in zip(vs, vs[1:]):
            es.append(arcs.setdefault((a, b), len(arcs)))
        return DirectedPath(tuple(vs), tuple(es))

    ins = [path(r) for r in in_routes]
    outs = [path(r) for r in out_routes]
    D = Digraph(range(len(pts)), [(e, a, b) for (a, b), e in arcs.items()])
    pos = {}
    for (r, c), v in pts.items():
        t = 2 * math.pi * c / C
        pos[v] = (r * math.cos(t), r * math.sin(t))
    ring = lambda k: [pts[(k, c)] for c in range(C)]
    circuits = [DirectedPath.from_vertices(D, ring(k) + [ring(k)[0]]) for k in range(1, N + 1)]
    E = embedding_from_coordinates(
        D, pos, "cylinder", {}, outer=(circuits[-1].edges[0], True), hole=(circuits[0].edges[0], False)
    )
    return E, circuits, ins, outs


def radial_out(N, c):
    return [(k, c) for k in range(1, N + 1)]


def radial_in(N, c):
    return [(k, c) for k in range(N, 0, -1)]


def bubbling_instance(n: int = 1):
    """Radial out-paths; every in-path bubbles back along the two innermost band rings."""
    L = 3 * n - 1
    N = 2 * L + 1
    mid = N // 2
    C = 3 * L + 3 * L + 6
    outs = [radial_out(N, c) for c in range(L)]
    ins = []
    for t in range(L):
        c = L + 3 + 3 * t
        route = [(k, c) for k in range(N, mid + 2, -1)]
        for k in (mid + 2, mid + 1):
            route += [(k, c), (k + 0.5, c - 0.5), (k, c - 1)]
            c -= 1
        route += [(k, c) for k in range(mid, 0, -1)]
        ins.append(route)
    return annulus(N, C, ins, outs)


def spiral_instance(n: int = 1):
    """In-paths spiral through every out-path column outside the middle ring,
    then run straight in; out-paths are radial."""
    L = 3 * n - 1
    N = 2 * L + 2 + 2 * L + 2
    mid = N // 2
    C = 2 * L + 2
    outs = [radial_out(N, c) for c in range(L)]
    ins = []
    for t in range(L):
        c = L + 1 + t
        route = []
        for k in range(N, mid, -1):
            route.append((k, c))
            c += 1
        route += [(k, c) for k in range(mid, 0, -1)]
        ins.append(route)
    return annulus(N, C, ins, outs)

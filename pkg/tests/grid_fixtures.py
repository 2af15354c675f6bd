"""Hand-drawn disk systems for the grid-extraction tests.

Horizontal ``j`` lies on the line ``y = 10j`` and runs right to left.  A
bubbling vertical arrives at ``x0-2`` from below, arches over the horizontal
and comes back down at ``x0+2`` before leaving upwards, so it meets every
horizontal twice, in reverse.
"""
from __future__ import annotations

from .disk_fixtures import build_system


def _horizontals(nh, xs, right, left=0):
    return [[(right, 10 * j)] + [(x, 10 * j) for x in sorted(set(xs), reverse=True)] + [(left, 10 * j)] for j in range(1, nh + 1)]


def _arch_vertical(x0, nh):
    pts = [(x0 + 2, 0)]
    for j in range(1, nh + 1):
        Y = 10 * j
        pts += [(x0 + 2, Y - 6), (x0 - 2, Y - 6), (x0 - 2, Y), (x0 - 2, Y + 1), (x0 + 1.5, Y + 1), (x0 + 2, Y)]
    pts.append((x0 + 2, 10 * nh + 10))
    return pts


def _straight_vertical(x0, nh):
    return [(x0, 10 * j) for j in range(0, nh + 2)]


def arch_system(nh: int, nv: int, bubbling=None):
    """``nv`` verticals ten apart; those in ``bubbling`` (default: all) arch."""
    bubbling = set(range(nv)) if bubbling is None else set(bubbling)
    vs, xs = [], []
    for i in range(nv):
        x0 = 10 * (i + 1)
        if i in bubbling:
            vs.append(_arch_vertical(x0, nh))
            xs += [x0 - 2, x0 + 2]
        else:
            vs.append(_straight_vertical(x0, nh))
            xs.append(x0)
    right = 10 * (nv + 1)
    return build_system(_horizontals(nh, xs, right), vs)


def segregated_system(nh: int = 4):
    """Two verticals segregated on every horizontal.

    The left one arches above each horizontal from ``x=10`` to ``x=30``; the
    right one dips below it from ``x=20`` to ``x=40``.  Along a horizontal the
    order is f2, f1, l2, l1.
    """
    v1 = [(30, 0)]
    v2 = [(40, 0)]
    for j in range(1, nh + 1):
        Y = 10 * j
        v1 += [(30, Y - 8), (10, Y - 8), (10, Y), (10, Y + 1), (29.5, Y + 1), (30, Y)]
        v2 += [(40, Y - 7), (20, Y - 7), (20, Y), (21, Y - 3), (40, Y - 3), (40, Y)]
    v1.append((30, 10 * nh + 10))
    v2.append((40, 10 * nh + 10))
    return build_system(_horizontals(nh, [10, 20, 30, 40], 60), [v1, v2])


def zigzag_system(swings: int = 4, left: int = 0):
    """A vertical that bounces between two horizontals ``swings`` times,
    drifting right, next to one straight vertical; ``left`` more straight
    verticals stand to its left."""
    off = 10 * left
    P = [(off + 5, 0)]
    xs = [5 + 10 * i for i in range(left)]
    for s in range(swings):
        x = off + 5 + 5 * s
        xs.append(x)
        P += [(x, 10), (x, 20)]
        if s < swings - 1:
            P.append((x + 2, 15))
    P.append((P[-1][0], 30))
    right_x = off + 5 + 5 * swings + 10
    Q = _straight_vertical(right_x, 2)
    lefts = [_straight_vertical(5 + 10 * i, 2) for i in range(left)]
    return build_system(_horizontals(2, xs + [right_x], right_x + 10), lefts + [P, Q])


def _pair_level(kind, Y):
    """Points of the two verticals between level ``Y-10`` and their departure from ``Y``."""
    if kind == "seg":
        v1 = [(30, Y - 8), (10, Y - 8), (10, Y), (10, Y + 1), (29.5, Y + 1), (30, Y)]
        v2 = [(40, Y - 7), (20, Y - 7), (20, Y), (21, Y - 3), (40, Y - 3), (40, Y)]
        xs = [10, 20, 30, 40]
    elif kind == "arch":
        v1 = [(30, Y - 8), (25, Y - 8), (25, Y), (25, Y + 1), (29.5, Y + 1), (30, Y)]
        v2 = [(40, Y - 7), (35, Y - 7), (35, Y), (35, Y + 1), (39.5, Y + 1), (40, Y)]
        xs = [25, 30, 35, 40]
    else:
        v1 = [(30, Y - 8), (30, Y)]
        v2 = [(40, Y - 7), (40, Y)]
        xs = [30, 40]
    return v1, v2, xs


def random_pair_system(rng, nh: int):
    """Two verticals whose behaviour on each horizontal is drawn at random:
    segregated, integrated (two small arches) or a plain crossing."""
    v1, v2 = [(30, 0)], [(40, 0)]
    hs = []
    kinds = []
    for j in range(1, nh + 1):
        kind = rng.choice(["seg", "arch", "cross"])
        kinds.append(kind)
        a, b, xs = _pair_level(kind, 10 * j)
        v1 += a
        v2 += b
        hs.append([(60, 10 * j)] + [(x, 10 * j) for x in sorted(xs, reverse=True)] + [(0, 10 * j)])
    v1.append((30, 10 * nh + 10))
    v2.append((40, 10 * nh + 10))
    return build_system(hs, [v1, v2]), kinds

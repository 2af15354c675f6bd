import random
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from dirgrid.digraph import Digraph, bidirected, check_disjoint_paths, check_separator, eulerianize
from dirgrid.embedding import winding
from dirgrid.errors import InvalidInput
from dirgrid.gridextract import PipelineConfig
from dirgrid.gridextract.cuts import (
    CountingInconclusive,
    cylinder_witness,
    find_circuits_and_paths,
    inside_vertices,
    link_cuts,
    undirected_view,
    validate_circuits_and_paths,
    validate_undirected_witness,
)
from dirgrid.minors import generate_cylindrical_grid


def _expand(D, mult):
    arcs = []
    for e, (t, h) in sorted(D.edges.items()):
        for _ in range(mult[e]):
            arcs.append((len(arcs), t, h))
    return Digraph(D.vertices, arcs)


def test_link_cuts_on_eulerian_cylinder():
    D, W, _ = generate_cylindrical_grid(4)
    G = _expand(D, eulerianize(D, 6).multiplicity)
    C1 = [W.vertex(1, j) for j in range(1, 8)]
    C2 = [W.vertex(4, j) for j in range(1, 8)]
    r = link_cuts(G, C1, C2, 1)
    assert r.linked and len(r.paths) == 1
    assert check_disjoint_paths(G, C1, C2, r.paths).ok


def _bottleneck():
    # C1 and C2 of size 7 joined only through six middle vertices
    c1, mid, c2 = range(7), range(7, 13), range(13, 20)
    pairs = [(a, 7 + a % 6) for a in c1] + [(7 + k, 13 + k) for k in range(6)] + [(7, 19)]
    return bidirected(range(20), pairs), list(c1), list(c2)


def test_link_cuts_planted_cut():
    D, C1, C2 = _bottleneck()
    r = link_cuts(D, C1, C2, 1)
    assert not r.linked
    assert len(r.undirected_cut) == 6
    assert check_separator(undirected_view(D), C1, C2, r.undirected_cut).ok


def test_link_cuts_rejects():
    star = bidirected(range(8), [(0, k) for k in range(1, 8)])
    with pytest.raises(InvalidInput, match="degree bound"):
        link_cuts(star, [1], [2], 1)
    D, C1, C2 = _bottleneck()
    with pytest.raises(InvalidInput, match="exactly"):
        link_cuts(D, C1[:6], C2, 1)
    path = Digraph.from_arcs([(0, 1)], range(2))
    with pytest.raises(InvalidInput, match="eulerian"):
        link_cuts(path, [0], [1], 1)


@st.composite
def bounded_bidirected(draw):
    nv = draw(st.integers(14, 22))
    rng = random.Random(draw(st.integers(0, 10**6)))
    deg = [0] * nv
    pairs = set()
    for _ in range(draw(st.integers(10, 50))):
        u, v = rng.sample(range(nv), 2)
        if (u, v) in pairs or (v, u) in pairs or deg[u] >= 6 or deg[v] >= 6:
            continue
        pairs.add((u, v))
        deg[u] += 1
        deg[v] += 1
    order = list(range(nv))
    rng.shuffle(order)
    return bidirected(range(nv), sorted(pairs)), order[:7], order[7:14]


@settings(max_examples=40, deadline=None)
@given(bounded_bidirected())
def test_link_cuts_outcomes_check(case):
    D, C1, C2 = case
    r = link_cuts(D, C1, C2, 1)
    if r.linked:
        assert check_disjoint_paths(D, C1, C2, r.paths).ok
    else:
        # a directed failure would contradict the degree argument
        assert r.undirected_cut is not None and len(r.undirected_cut) < 7
        assert check_separator(undirected_view(D), C1, C2, r.undirected_cut).ok


# ---------------------------------------------------------------------------
# find_circuits_and_paths

SMALL = PipelineConfig(circuits_required=4, paths_required=8, cut_order=2, circuit_count=2, big_side=3)


def test_cylinder_witness_validates():
    _, W, E = generate_cylindrical_grid(5)
    w = cylinder_witness(W)
    assert validate_undirected_witness(E, w).ok
    swapped = replace(w, circuits=(w.circuits[1], w.circuits[0]) + w.circuits[2:])
    assert "nested" in validate_undirected_witness(E, swapped).clauses()
    crossing = replace(w, paths=(w.paths[0], w.paths[0]))
    assert "path-disjoint" in validate_undirected_witness(E, crossing).clauses()


def test_inside_vertices_of_a_ring():
    D, W, E = generate_cylindrical_grid(4)
    assert inside_vertices(E, W.circuits[2].edges) == W.circuits[0].vertex_set() | W.circuits[1].vertex_set()
    assert inside_vertices(E, W.circuits[0].edges) == frozenset()


def test_find_circuits_on_cylindrical_grid():
    D, W, E = generate_cylindrical_grid(8)
    out = find_circuits_and_paths(E, cylinder_witness(W), SMALL, 2)
    assert validate_circuits_and_paths(E, out, 2).ok
    assert out.orientation == 1
    assert len(out.in_paths) == len(out.out_paths) == 2
    # every circuit is one of the generator's rings, untouched by either cut
    rings = {C.vertex_set() for C in W.circuits}
    for C in out.circuits:
        assert C.vertex_set() in rings
        assert not C.vertex_set() & (out.cuts[0] | out.cuts[1])
        assert winding(E, C.edges) == 1


def test_find_circuits_witness_too_small():
    D, W, E = generate_cylindrical_grid(6)
    with pytest.raises(InvalidInput, match="witness too small"):
        find_circuits_and_paths(E, cylinder_witness(W), SMALL, 2)
    with pytest.raises(InvalidInput, match="witness too small"):
        find_circuits_and_paths(E, cylinder_witness(W), PipelineConfig(), 1)


def test_find_circuits_counting_inconclusive():
    D, W, E = generate_cylindrical_grid(8)
    greedy = replace(SMALL, circuit_count=3)
    with pytest.raises(CountingInconclusive) as info:
        find_circuits_and_paths(E, cylinder_witness(W), greedy, 2)
    assert info.value.counts[1] < 6 and info.value.curve


def test_find_circuits_clockwise():
    # reversing every edge turns the rings clockwise and swaps spoke roles
    D, W, E = generate_cylindrical_grid(8)
    R = D.reverse()
    ER = replace(E, host=R, hole=E.twin(E.hole), outer=E.twin(E.outer))
    out = find_circuits_and_paths(ER, cylinder_witness(W), SMALL, 2)
    assert out.orientation == -1
    assert validate_circuits_and_paths(ER, out, 2).ok

import random
from dataclasses import replace

import pytest

from dirgrid.digraph import Digraph, DirectedPath, directed_cycle
from dirgrid.embedding import validate_embedding
from dirgrid.errors import InvalidInput
from dirgrid.minors import (
    AcyclicGridWitness,
    LoopEdge,
    MinorModel,
    NotContractible,
    apply_step,
    butterfly_contract,
    find_butterfly_minor,
    generate_acyclic_grid,
    generate_cylindrical_grid,
    is_butterfly_contractible,
    validate_grid_witness,
)

from .oracles import has_cycle
from .strategies import random_dag, random_digraph

DIGON = Digraph.from_arcs([(0, 1), (1, 0)], range(2))


def test_contract_path_edge():
    D = Digraph.from_arcs([(0, 1), (1, 2)], range(3))
    C = butterfly_contract(D, 0)
    assert C.vertices == (0, 2)
    assert list(C.edges.values()) == [(0, 2)]


def test_contract_digon_drops_loop():
    # a<->b plus a->c; a->b is the only in-edge of b
    D = Digraph.from_arcs([(0, 1), (1, 0), (0, 2)], range(3))
    C = butterfly_contract(D, 0)
    assert C.vertices == (0, 2)
    assert sorted(C.edges.values()) == [(0, 2)]


def test_contract_rejects():
    D = Digraph.from_arcs([(0, 1), (0, 2), (3, 1)], range(4))
    assert not is_butterfly_contractible(D, 0)
    with pytest.raises(NotContractible):
        butterfly_contract(D, 0)
    L = Digraph([0], [(0, 0, 0)])
    with pytest.raises(LoopEdge):
        butterfly_contract(L, 0)
    with pytest.raises(InvalidInput):
        butterfly_contract(D, 99)


def test_parallel_edges_survive_contraction():
    D = Digraph(range(3), [(0, 0, 1), (1, 1, 2), (2, 0, 2)])
    C = butterfly_contract(D, 1)
    assert sorted(C.edges.values()) == [(0, 1), (0, 1)]


def test_contraction_counts():
    rng = random.Random(4)
    for _ in range(60):
        D = random_digraph(rng, rng.randint(2, 7), 0.4)
        for e in D.edges:
            if is_butterfly_contractible(D, e):
                C = butterfly_contract(D, e)
                assert len(C) == len(D) - 1
                assert C.num_edges() <= D.num_edges() - 1


def _contraction_closure(D):
    seen = {D.key(): D}
    todo = [D]
    while todo:
        G = todo.pop()
        for e in G.edges:
            if is_butterfly_contractible(G, e):
                H = butterfly_contract(G, e)
                if H.key() not in seen:
                    seen[H.key()] = H
                    todo.append(H)
    return seen.values()


def test_contraction_preserves_acyclicity_exhaustively():
    rng = random.Random(10)
    for _ in range(25):
        D = random_dag(rng, rng.randint(2, 8), 0.3)
        for H in _contraction_closure(D):
            assert not has_cycle(H)


def test_single_vertex_pattern():
    one = Digraph([0], [])
    m = find_butterfly_minor(directed_cycle(4), one)
    assert m is not None and m.verify(directed_cycle(4), one).ok
    assert find_butterfly_minor(Digraph([], []), one) is None


def test_digon_in_cylindrical_grid():
    D, _, _ = generate_cylindrical_grid(2)
    m = find_butterfly_minor(D, DIGON)
    assert m is not None
    assert m.verify(D, DIGON).ok
    assert m.replay(D).key() == m.replay(D).key()


def test_digon_absent_from_small_dags():
    rng = random.Random(1)
    for _ in range(12):
        D = random_dag(rng, rng.randint(2, 8), 0.35)
        assert find_butterfly_minor(D, DIGON) is None


def test_model_verify_rejects():
    D, _, _ = generate_cylindrical_grid(2)
    m = find_butterfly_minor(D, DIGON)
    bad = replace(m, script=m.script[:-1])
    assert not bad.verify(D, DIGON).ok
    broken = MinorModel((("contract", 10_000),), {})
    assert "script" in broken.verify(D, DIGON).clauses()


def _random_minor(rng, D, steps):
    for _ in range(steps):
        opts = [("del_v", v) for v in D.vertices]
        opts += [("del_e", e) for e in D.edges]
        opts += [("contract", e) for e in D.edges if is_butterfly_contractible(D, e)]
        if not opts or len(D) <= 2:
            break
        D = apply_step(D, rng.choice(opts))
    return D


def _relabel(D):
    idx = {v: i for i, v in enumerate(D.vertices)}
    return Digraph(range(len(D)), [(e, idx[t], idx[h]) for e, (t, h) in D.edges.items()])


def test_transitivity_on_random_triples():
    rng = random.Random(6)
    checked = 0
    for _ in range(12):
        A = random_digraph(rng, rng.randint(4, 6), 0.4)
        B = _relabel(_random_minor(rng, A, rng.randint(1, 3)))
        C = _relabel(_random_minor(rng, B, rng.randint(1, 2)))
        mab = find_butterfly_minor(A, B)
        mbc = find_butterfly_minor(B, C)
        assert mab is not None and mbc is not None
        mac = find_butterfly_minor(A, C)
        assert mac is not None and mac.verify(A, C).ok
        checked += 1
    assert checked == 12


def test_cylindrical_grid_counts():
    for n in range(1, 7):
        D, W, E = generate_cylindrical_grid(n)
        assert len(D) == 2 * n * n
        assert D.num_edges() == 2 * n * n + 2 * n * (n - 1)
        assert validate_grid_witness(D, W).ok
        assert validate_embedding(E).ok
        if n == 3:
            assert all(D.in_degree(v) <= 2 and D.out_degree(v) <= 2 for v in D.vertices)
    with pytest.raises(InvalidInput):
        generate_cylindrical_grid(0)


def test_cyl_witness_rejects_reversed_spoke():
    D, W, _ = generate_cylindrical_grid(3)
    e = W.spokes[(1, 1)]
    t, h = D.edges[e]
    arcs = [(f, h, t) if f == e else (f, a, b) for f, (a, b) in D.edges.items()]
    D2 = Digraph(D.vertices, arcs)
    assert "spoke-direction" in validate_grid_witness(D2, W).clauses()


def test_cyl_witness_rejects_shared_circuits():
    D, W, _ = generate_cylindrical_grid(2)
    bad = replace(W, circuits=(W.circuits[0], W.circuits[0]))
    assert "disjoint" in validate_grid_witness(D, bad).clauses()


def test_acyclic_grid_generator_and_rejects():
    for n in range(1, 5):
        D, W = generate_acyclic_grid(n)
        assert validate_grid_witness(D, W).ok
        assert D.is_acyclic()
    # a vertical that meets a horizontal twice
    D = Digraph.from_arcs([(2, 1), (1, 0), (0, 3), (3, 2)], range(4))
    H = (DirectedPath.from_vertices(D, [2, 1, 0]),)
    V = (DirectedPath.from_vertices(D, [0, 3, 2]),)
    W = AcyclicGridWitness(1, H, V)
    assert "exactly-one-vertex" in validate_grid_witness(D, W).clauses()


def test_bubble_flavor_checks_reverse():
    D, W = generate_acyclic_grid(2)
    assert validate_grid_witness(D, replace(W, flavor="bubble")).ok
    assert "flavor" in validate_grid_witness(D, replace(W, flavor="odd")).clauses()

"""Hypothesis strategies and seeded generators for small digraphs."""
import random

from hypothesis import strategies as st

from dirgrid.digraph import Digraph


@st.composite
def digraphs(draw, max_vertices=8, min_vertices=1, loops=False, multi=False, acyclic=False):
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(n) if (loops or u != v) and (not acyclic or u < v)]
    if not pairs:
        return Digraph(range(n))
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n, unique=not multi))
    return Digraph.from_arcs(chosen, range(n))


def random_digraph(rng: random.Random, n: int, p: float, acyclic: bool = False) -> Digraph:
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and (not acyclic or u < v) and rng.random() < p]
    return Digraph.from_arcs(arcs, range(n))


def random_dag(rng: random.Random, n: int, p: float = 0.4) -> Digraph:
    perm = list(range(n))
    rng.shuffle(perm)
    arcs = [(perm[u], perm[v]) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Digraph.from_arcs(arcs, range(n))

import random
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from dirgrid.combinatorics import (
    CleanClique,
    LabelCover,
    LabeledClique,
    clean_clique_or_cover,
    is_clean,
    is_cover,
    longest_monotone_subsequence,
    transitive_subtournament,
)
from dirgrid.digraph import Digraph, directed_cycle
from dirgrid.errors import Exhausted, InvalidInput


def _brute_monotone_length(seq):
    best = 0
    for r in range(len(seq), 0, -1):
        for idx in combinations(range(len(seq)), r):
            sub = [seq[i] for i in idx]
            if sub == sorted(sub) or sub == sorted(sub, reverse=True):
                return r
    return best


def _is_monotone_subsequence(sub, seq):
    it = iter(seq)
    return all(x in it for x in sub) and (sub == sorted(sub) or sub == sorted(sub, reverse=True))


def test_monotone_examples():
    assert longest_monotone_subsequence([3, 1, 2]) == [1, 2]
    assert longest_monotone_subsequence([1, 2, 5, 9]) == [1, 2, 5, 9]
    assert longest_monotone_subsequence([]) == []


def test_every_permutation_of_five_has_monotone_three():
    for p in permutations(range(5)):
        assert len(longest_monotone_subsequence(list(p))) >= 3


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-50, 50), unique=True, max_size=10))
def test_monotone_matches_enumeration(seq):
    got = longest_monotone_subsequence(seq)
    assert len(got) == _brute_monotone_length(seq)
    assert _is_monotone_subsequence(got, seq)
    if seq:
        assert len(got) ** 2 >= len(seq)


def _tournament(n, bits):
    arcs = []
    for (u, v), b in zip(combinations(range(n), 2), bits):
        arcs.append((u, v) if b else (v, u))
    return Digraph.from_arcs(arcs, range(n))


def _transitive(T, S):
    sub = T.induced(S)
    return sub.is_acyclic()


def test_transitive_subtournament_examples():
    tt4 = Digraph.from_arcs([(u, v) for u, v in combinations(range(4), 2)])
    assert transitive_subtournament(tt4, 4) == frozenset(range(4))
    c3 = directed_cycle(3)
    assert transitive_subtournament(c3, 3) is None
    assert len(transitive_subtournament(c3, 2)) == 2
    with pytest.raises(InvalidInput):
        transitive_subtournament(Digraph.from_arcs([(0, 1), (1, 0)]), 2)


def test_every_four_tournament_has_transitive_three():
    # every 8-vertex tournament contains a 4-vertex one, so this covers n = 8
    for bits in product([0, 1], repeat=6):
        T = _tournament(4, bits)
        S = transitive_subtournament(T, 3)
        assert S is not None and _transitive(T, S)


def test_random_eight_tournaments():
    rng = random.Random(3)
    for _ in range(50):
        T = _tournament(8, [rng.random() < 0.5 for _ in range(28)])
        S = transitive_subtournament(T, 3)
        assert S is not None and _transitive(T, S)


def test_clean_clique_examples():
    L = LabeledClique.build(range(5))
    assert clean_clique_or_cover(L, 4, 1, 1) == CleanClique((0, 1, 2, 3))

    K3 = LabeledClique.build(range(3), {(0, 1): {2}, (0, 2): {1}, (1, 2): {0}})
    assert clean_clique_or_cover(K3, 3, 4, 1) is None
    two = clean_clique_or_cover(K3, 2, 4, 1)
    assert isinstance(two, CleanClique) and is_clean(K3, two.vertices)

    star = LabeledClique.build(range(4), {p: {0} for p in combinations(range(1, 4), 2)})
    out = clean_clique_or_cover(star, 4, 3, 1)
    assert isinstance(out, LabelCover) and out.vertices == (0,) and is_cover(star, out.edges, out.vertices)


def test_clean_clique_rejects_self_label():
    L = LabeledClique.build(range(3), {(0, 1): {0}})
    with pytest.raises(InvalidInput):
        clean_clique_or_cover(L, 2, 1, 1)


def test_clean_clique_budget():
    with pytest.raises(Exhausted):
        full = {p: set(range(6)) - set(p) for p in combinations(range(6), 2)}
        clean_clique_or_cover(LabeledClique.build(range(6), full), 3, 9, 9, budget=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 6), st.randoms(use_true_random=False), st.integers(2, 4))
def test_clean_branch_reverifies(N, rnd, n):
    labels = {}
    for p in combinations(range(N), 2):
        others = [v for v in range(N) if v not in p]
        labels[p] = {v for v in others if rnd.random() < 0.3}
    L = LabeledClique.build(range(N), labels)
    out = clean_clique_or_cover(L, n, 2, 1)
    if isinstance(out, CleanClique):
        assert is_clean(L, out.vertices)
    elif isinstance(out, LabelCover):
        assert is_cover(L, out.edges, out.vertices)
        assert not any(is_clean(L, S) for S in combinations(range(N), n))

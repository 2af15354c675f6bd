import pytest

from dirgrid.digraph import Digraph, DirectedPath
from dirgrid.embedding import MeetingKind, classify_meeting, embedding_from_coordinates, grid_disk
from dirgrid.errors import InvalidInput
from dirgrid.minors import generate_cylindrical_grid
from dirgrid.rerouting import (
    RoutedSystem,
    check_disk_reroute,
    cylinder_property,
    hits_in_reverse,
    property_iii,
    reroute_cylinder,
    reroute_disk,
    routing_edge_count,
    validate_routed_system,
)

from .disk_fixtures import build_system, suite
from .oracles import min_union_brute, simple_paths


def _p(vs):
    return DirectedPath(tuple(vs), tuple(range(1000, 1000 + len(vs) - 1)))


def test_hits_in_reverse_examples():
    assert hits_in_reverse(_p([1, 2, 3]), _p([4, 5, 6]))
    assert not hits_in_reverse(_p([1, 2, 3]), _p([1, 2, 3]))
    assert hits_in_reverse(_p([1, 2, 3]), _p([4, 2, 5]))
    assert hits_in_reverse(_p([1, 2, 3]), _p([3, 2]))


def test_grid_is_a_fixed_point():
    for h, v in [(1, 1), (2, 3), (3, 3)]:
        E, H, V = grid_disk(h, v)
        S = RoutedSystem(E, H, V)
        for mode in ("exact", "local"):
            model, out = reroute_disk(S, mode)
            assert model.script == ()
            assert out.horizontals == S.horizontals and out.verticals == S.verticals


def _bounce_fixture():
    # the vertical rides along the horizontal for one edge, dips back below
    # it, then crosses it further left
    H = [(4, 2), (3, 2), (2, 2), (1, 2), (0, 2)]
    V = [(3, 0), (3, 1), (3, 2), (2, 2), (2, 1), (1, 1), (1, 2), (1, 3), (1, 4)]
    return build_system([H], [V])


def test_bounce_with_shared_edge():
    S = _bounce_fixture()
    assert validate_routed_system(S).ok
    P, Q = S.horizontals[0], S.verticals[0]
    assert set(P.edges) & set(Q.edges)
    assert not hits_in_reverse(P, Q)
    # Q meets P at (1,2) coming from below and leaving above: a crossing
    u = P.vertices[3]
    assert classify_meeting(S.embedding, P, Q, u) is MeetingKind.CROSS
    for mode in ("exact", "local"):
        model, out = reroute_disk(S, mode)
        assert check_disk_reroute(S, model, out).ok
        assert any(op == "contract" for op, _ in model.script)
        for Pn in out.horizontals:
            for Qn in out.verticals:
                assert hits_in_reverse(Pn, Qn)
                assert not set(Pn.edges) & set(Qn.edges)
        assert model.replay(S.host).key() == out.host.key()


def test_exact_uses_strictly_fewer_edges_on_shortcut():
    S = _bounce_fixture()
    model, out = reroute_disk(S, "exact")
    contracted = sum(op == "contract" for op, _ in model.script)
    assert out.host.num_edges() + contracted < routing_edge_count(S.paths)


def test_property_iii_rejects_stray_vertical():
    E, H, V = grid_disk(2, 2)
    S = RoutedSystem(E, H, V)
    assert property_iii(S, H, V).ok
    # claiming the right vertical as the only one makes the left vertical
    # fine, but the right-most original is then V[0]: V[1] strays
    S0 = RoutedSystem(E, H, (V[0],))
    assert "property-iii" in property_iii(S0, H, V).clauses()


def test_reroute_disk_rejects_bad_input():
    E, H, V = grid_disk(2, 2)
    with pytest.raises(InvalidInput):
        reroute_disk(RoutedSystem(E, H, ()), "exact")
    with pytest.raises(InvalidInput):
        reroute_disk(RoutedSystem(E, H, V), "greedy")
    with pytest.raises(InvalidInput):
        reroute_disk(RoutedSystem(E, (H[0], H[0]), V), "exact")


SUITE = suite(24, seed=0)


@pytest.mark.parametrize("i", range(len(SUITE)))
@pytest.mark.parametrize("mode", ["exact", "local"])
def test_suite_outputs_check(i, mode):
    S = SUITE[i]
    model, out = reroute_disk(S, mode)
    assert check_disk_reroute(S, model, out).ok
    # idempotence
    model2, out2 = reroute_disk(out, mode)
    assert model2.script == ()
    assert (out2.horizontals, out2.verticals) == (out.horizontals, out.verticals)


def _brute_minimum(S):
    D = S.host
    m = S.embedding.marks
    edge = {(t, h): e for e, (t, h) in D.edges.items()}

    def cands(src, dst, fam_ok):
        out = []
        for vs in simple_paths(D, src, dst):
            P = DirectedPath(tuple(vs), tuple(edge[a, b] for a, b in zip(vs, vs[1:])))
            if fam_ok(P):
                out.append((P.vertex_set(), frozenset(P.edges)))
        return out

    vc = cands(m["B"], m["T"], lambda P: property_iii(S, (), (P,)).ok)
    hc = cands(m["R"], m["L"], lambda P: property_iii(S, (P,), ()).ok)
    return min_union_brute(vc, hc, len(S.verticals), len(S.horizontals))


SMALL = [S for S in SUITE if S.host.num_edges() <= 14]


def test_small_suite_is_large_enough():
    assert len(SMALL) >= 12


@pytest.mark.parametrize("i", range(len(SMALL)))
def test_exact_minimality_by_exhaustion(i):
    S = SMALL[i]
    model, out = reroute_disk(S, "exact")
    used = out.host.num_edges() + sum(op == "contract" for op, _ in model.script)
    assert used == _brute_minimum(S)


# ---------------------------------------------------------------------------
# cylinder


def test_cylindrical_grid_already_has_property():
    D, W, E = generate_cylindrical_grid(2)
    n = W.n
    inpaths = tuple(DirectedPath((W.vertex(2, j), W.vertex(1, j)), (W.spokes[(1, j)],)) for j in range(n + 1, 2 * n + 1))
    S = RoutedSystem(E, W.circuits, inpaths)
    assert cylinder_property(E, W.circuits, inpaths).ok
    model, out = reroute_cylinder(S)
    assert model.script == () and out == S


def _wrap_fixture(with_orientation: bool):
    # a ccw diamond a,b,c,d around the hole; a path from t outside to s
    # inside touches the diamond at a and re-enters at c after going round
    # the outside (north if with the orientation, south otherwise)
    pos = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1), 4: (3, 0), 5: (-0.5, 0)}
    y = 1.5 if with_orientation else -1.5
    pos.update({6: (1.5, y), 7: (-1.5, y)})
    arcs = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (0, 6), (6, 7), (7, 2), (2, 5)]
    D = Digraph.from_arcs(arcs, range(8))
    E = embedding_from_coordinates(D, pos, "cylinder", {}, outer=(4, True), hole=(8, True))
    Q = DirectedPath((0, 1, 2, 3, 0), (0, 1, 2, 3))
    P = DirectedPath((4, 0, 6, 7, 2, 5), (4, 5, 6, 7, 8))
    return RoutedSystem(E, (Q,), (P,))


def test_path_wrapping_with_the_circuits_is_rerouted():
    S = _wrap_fixture(True)
    assert "wrap" in cylinder_property(S.embedding, S.horizontals, S.verticals).clauses()
    model, out = reroute_cylinder(S)
    assert model.script
    assert cylinder_property(out.embedding, out.horizontals, out.verticals).ok
    assert model.verify(S.host, out.host).ok
    assert len(out.horizontals) == 1 and len(out.verticals) == 1


def test_path_wrapping_against_the_circuits_is_left_alone():
    S = _wrap_fixture(False)
    assert cylinder_property(S.embedding, S.horizontals, S.verticals).ok
    model, out = reroute_cylinder(S)
    assert model.script == ()


def _two_rings(opposite: bool):
    pos = {}
    arcs = []
    for r, base in ((1, 0), (2, 4)):
        pts = [(r, 0), (0, r), (-r, 0), (0, -r)]
        for k, p in enumerate(pts):
            pos[base + k] = p
        ring = [(base + k, base + (k + 1) % 4) for k in range(4)]
        if opposite and r == 2:
            ring = [(b, a) for a, b in ring]
        arcs += ring
    arcs.append((0, 4))  # a spoke keeps the drawing connected
    D = Digraph.from_arcs(arcs, range(8))
    E = embedding_from_coordinates(D, pos, "cylinder", {}, outer=(4, not opposite), hole=(0, False))
    C1 = DirectedPath.from_vertices(D, [0, 1, 2, 3, 0])
    outer = [4, 5, 6, 7, 4] if not opposite else [4, 7, 6, 5, 4]
    C2 = DirectedPath.from_vertices(D, outer)
    return E, (C1, C2)


def test_cylinder_preconditions():
    E, F = _two_rings(opposite=True)
    P = DirectedPath((0,), ())
    with pytest.raises(InvalidInput, match="oriented"):
        reroute_cylinder(RoutedSystem(E, F, (P,)))
    E, F = _two_rings(opposite=False)
    assert reroute_cylinder(RoutedSystem(E, F, (P,)))[0].script == ()
    # a circuit that bounds an ordinary face does not separate
    D = Digraph.from_arcs([(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)], range(5))
    pos = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (-1, 0), 4: (0, -1)}
    # the hole is inside the second triangle
    E2 = embedding_from_coordinates(D, pos, "cylinder", {}, outer=(0, True), hole=(3, False))
    C = DirectedPath.from_vertices(D, [0, 1, 2, 0])
    with pytest.raises(InvalidInput, match="separate"):
        reroute_cylinder(RoutedSystem(E2, (C,), (DirectedPath((3,), ()),)))

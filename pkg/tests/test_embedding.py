import pytest

from dirgrid.digraph import Digraph, DirectedPath
from dirgrid.embedding import (
    MeetingKind,
    RotationEmbedding,
    classify_meeting,
    embedding_from_coordinates,
    grid_disk,
    left_right_order,
    path_sides,
    separates,
    side_at,
    top_bottom_order,
    validate_embedding,
    winding,
)
from dirgrid.errors import InvalidInput
from dirgrid.minors import generate_cylindrical_grid


def _signed_area(pos, vs):
    return sum(pos[a][0] * pos[b][1] - pos[b][0] * pos[a][1] for a, b in zip(vs, vs[1:] + vs[:1])) / 2


def test_face_orientation_convention():
    pos = {0: (0, 0), 1: (1, 0), 2: (0, 1)}
    D = Digraph.from_arcs([(0, 1), (1, 2), (2, 0)], range(3))
    E = embedding_from_coordinates(D, pos)
    areas = sorted(_signed_area(pos, E.face_vertices(i)) for i in range(len(E.faces())))
    # inner face walked clockwise, outer face counter-clockwise
    assert areas == [-0.5, 0.5]


def test_every_dart_in_exactly_one_face():
    for h, v in [(1, 1), (2, 3), (3, 3)]:
        E, _, _ = grid_disk(h, v)
        darts = [d for f in E.faces() for d in f]
        assert sorted(darts) == sorted(E.darts())
        D = E.host
        assert len(D) - D.num_edges() + len(E.faces()) == 2


def test_validate_grid_disks():
    for h, v in [(1, 1), (2, 2), (3, 2)]:
        E, _, _ = grid_disk(h, v)
        assert validate_embedding(E).ok


def test_boundary_roles_swapped():
    E, _, _ = grid_disk(1, 1)
    m = dict(E.marks)
    bad = RotationEmbedding(E.host, E.rotation, "disk", {"T": m["L"], "L": m["T"], "B": m["B"], "R": m["R"]})
    rep = validate_embedding(bad)
    assert "boundary-order" in rep.clauses()


def test_boundary_order_within_role():
    E, _, _ = grid_disk(2, 2)
    m = dict(E.marks)
    bad = RotationEmbedding(E.host, E.rotation, "disk", {**m, "T": m["T"][::-1]})
    assert "boundary-order" in validate_embedding(bad).clauses()


def test_nonplanar_rotation_rejected():
    K5 = Digraph.from_arcs([(i, j) for i in range(5) for j in range(i + 1, 5)], range(5))
    rot = {v: tuple(sorted(set(K5.out_edges(v)) | set(K5.in_edges(v)))) for v in K5.vertices}
    assert "euler" in validate_embedding(RotationEmbedding(K5, rot)).clauses()


def test_bad_rotation_and_degree():
    E, _, _ = grid_disk(1, 1)
    rot = dict(E.rotation)
    v = next(iter(rot))
    rot[v] = rot[v][:-1]
    assert "rotation" in validate_embedding(RotationEmbedding(E.host, rot, "disk", dict(E.marks))).clauses()
    m = dict(E.marks)
    swapped = RotationEmbedding(E.host, E.rotation, "disk", {"T": m["B"], "L": m["L"], "B": m["T"], "R": m["R"]})
    assert "degree" in validate_embedding(swapped).clauses()


def test_left_right_and_top_bottom_orders():
    E, H, V = grid_disk(2, 3)
    assert left_right_order(E, V) == [0, 1, 2]
    assert left_right_order(E, [V[2], V[0], V[1]]) == [1, 2, 0]
    assert left_right_order(E, [V[1]]) == [0]
    assert top_bottom_order(E, [H[1], H[0]]) == [1, 0]


def test_curve_orders_reject_bad_witnesses():
    E, H, V = grid_disk(2, 2)
    with pytest.raises(InvalidInput):
        left_right_order(E, [V[0], H[0]])
    # a path that starts and ends on the bottom does not separate L from R
    with pytest.raises(InvalidInput):
        left_right_order(E, [H[0]])


def test_path_sides_grid():
    E, H, V = grid_disk(3, 3)
    s = path_sides(E, V[1])
    for v in V[0].vertices:
        assert s[v] == -1
    for v in V[2].vertices:
        assert s[v] == 1
    t = path_sides(E, H[1])
    assert all(t[v] == -1 for v in H[0].vertices)
    assert all(t[v] == 1 for v in H[2].vertices)


def _meeting_fixture(bounce: bool):
    # P runs right to left along y=1 through u=2; Q either passes straight
    # through u or touches it from above
    pos = {0: (4, 1), 1: (3, 1), 2: (2, 1), 3: (1, 1), 4: (0, 1)}
    arcs = [(0, 1), (1, 2), (2, 3), (3, 4)]
    if bounce:
        pos.update({5: (1.5, 2), 6: (2.5, 2)})
    else:
        pos.update({5: (2, 0), 6: (2, 2)})
    arcs += [(5, 2), (2, 6)]
    D = Digraph.from_arcs(arcs, range(7))
    E = embedding_from_coordinates(D, pos)
    P = DirectedPath.from_vertices(D, [0, 1, 2, 3, 4])
    Q = DirectedPath.from_vertices(D, [5, 2, 6])
    return E, P, Q


def test_classify_meeting_examples():
    E, P, Q = _meeting_fixture(bounce=False)
    assert classify_meeting(E, P, Q, 2) is MeetingKind.CROSS
    assert side_at(E, P, 2, Q.edges[0]) == "bottom"
    assert side_at(E, P, 2, Q.edges[1]) == "top"
    E, P, Q = _meeting_fixture(bounce=True)
    assert classify_meeting(E, P, Q, 2) is MeetingKind.BOUNCE
    assert side_at(E, P, 2, Q.edges[0]) == "top"
    with pytest.raises(InvalidInput):
        classify_meeting(E, P, Q, 0)
    with pytest.raises(InvalidInput):
        classify_meeting(E, P, Q, 1)


def test_grid_crossings_all_cross():
    E, H, V = grid_disk(3, 3)
    for P in H:
        for Q in V:
            u = next(iter(P.vertex_set() & Q.vertex_set()))
            assert classify_meeting(E, P, Q, u) is MeetingKind.CROSS


def test_classify_invariant_under_mirror():
    for bounce in (True, False):
        E, P, Q = _meeting_fixture(bounce)
        M = E.mirror()
        assert classify_meeting(E, P, Q, 2) is classify_meeting(M, P, Q, 2)
    E, H, V = grid_disk(2, 2)
    M = E.mirror()
    for P in H:
        for Q in V:
            u = next(iter(P.vertex_set() & Q.vertex_set()))
            assert classify_meeting(E, P, Q, u) is classify_meeting(M, P, Q, u)


def test_consecutive_edges_same_side_iff_bounce():
    for bounce in (True, False):
        E, P, Q = _meeting_fixture(bounce)
        e, f = Q.edges
        same = side_at(E, P, 2, e) == side_at(E, P, 2, f)
        assert same == (classify_meeting(E, P, Q, 2) is MeetingKind.BOUNCE)


def test_contract_and_delete_keep_planarity():
    E, H, V = grid_disk(2, 2)
    D = E.host
    for e in sorted(D.edges):
        C = E.contract(e)
        rep = validate_embedding(RotationEmbedding(C.host, C.rotation))
        assert "euler" not in rep.clauses()
    X = E.delete_edges([H[0].edges[1]])
    assert "euler" not in validate_embedding(RotationEmbedding(X.host, X.rotation)).clauses()


def test_cylinder_winding_and_separation():
    D, W, E = generate_cylindrical_grid(3)
    assert validate_embedding(E).ok
    for C in W.circuits:
        assert winding(E, C.edges) == 1
        assert separates(E, C.edges)
    # a small face-bounding cycle does not separate the hole from the outside
    face = E.faces()[0]
    if E.face_of(face[0]) not in (E.outer_face(), E.hole_face()):
        assert not separates(E, [d[0] for d in face])


def test_cylinder_requires_marked_faces():
    D, W, E = generate_cylindrical_grid(2)
    bad = RotationEmbedding(D, E.rotation, "cylinder")
    assert "marked-face" in validate_embedding(bad).clauses()

import pytest
from hypothesis import given, settings, strategies as st

from dirgrid.dgf import Curve, DgfDocument, DgfError, GridEntry, MinorEntry, parse_dgf, serialize
from dirgrid.digraph import Digraph, directed_cycle
from dirgrid.embedding import grid_disk, validate_embedding
from dirgrid.gridextract import PipelineConfig, assemble_cylindrical_grid, get_acyclic_grid, grid_parts
from dirgrid.havens import check_haven, haven_order
from dirgrid.minors import find_butterfly_minor, generate_cylindrical_grid
from dirgrid.rerouting import RoutedSystem


def _cyl_doc(n):
    D, W, E = generate_cylindrical_grid(n)
    C, I, O = grid_parts(W)
    curves = {f"C{i}": Curve("circuit", P.vertices, P.edges) for i, P in enumerate(C, 1)}
    curves |= {f"in{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(I, 1)}
    curves |= {f"out{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(O, 1)}
    return DgfDocument(f"cyl{n}", D, E, curves), W


def test_minimal_document():
    doc = parse_dgf("digraph g\nv 0\n")
    assert doc.name == "g" and doc.digraph.vertices == (0,)
    assert serialize(doc) == "digraph g\nv 0\n"


def test_generator_round_trip():
    doc, _ = _cyl_doc(2)
    text = serialize(doc)
    again = parse_dgf(text)
    assert serialize(again) == text
    assert again.digraph.key() == doc.digraph.key()
    assert dict(again.embedding.rotation) == dict(doc.embedding.rotation)
    assert again.embedding.outer == doc.embedding.outer and again.embedding.hole == doc.embedding.hole
    assert validate_embedding(again.embedding).ok
    assert again.curves == doc.curves


def test_disk_marks_round_trip():
    E, hs, vs = grid_disk(2, 3)
    doc = DgfDocument("d", E.host, E, {"h1": Curve("path", hs[0].vertices, hs[0].edges)})
    text = serialize(doc)
    again = parse_dgf(text)
    assert serialize(again) == text
    assert dict(again.embedding.marks) == dict(E.marks)
    assert text.index("mark T") < text.index("mark L") < text.index("mark B") < text.index("mark R")


def test_noncanonical_input_is_normalised():
    text = """
    # two vertices, written out of order
    digraph g
    e 1   1 0     # back edge
    v 1
    v 0
    e 0 0 1
    circuit loop 0 0 1 1 0
    config
      cut_order = 9
    end
    """
    doc = parse_dgf(text)
    canon = serialize(doc)
    assert canon.startswith("digraph g\nv 0\nv 1\ne 0 0 1\ne 1 1 0\ncircuit loop 0 0 1 1 0\nconfig\n")
    assert doc.config == PipelineConfig(cut_order=9)
    assert serialize(parse_dgf(canon)) == canon


def test_witness_blocks_round_trip():
    doc, _ = _cyl_doc(5)
    C, I, O = doc.paths(kind="circuit"), doc.paths("in"), doc.paths("out")
    g = assemble_cylindrical_grid(doc.embedding, C, I, O, 1)
    doc.grids["cyl"] = GridEntry("cyl", g.model, g.witness, g.branch)
    small = directed_cycle(3)
    w, cert = haven_order(small, 2)
    cdoc = DgfDocument("c3", small, certs={"h": cert})
    model = find_butterfly_minor(small, directed_cycle(2))
    cdoc.minors["m"] = MinorEntry("digon", model)
    for d in (doc, cdoc):
        text = serialize(d)
        again = parse_dgf(text)
        assert serialize(again) == text
    again = parse_dgf(serialize(cdoc))
    assert check_haven(small, again.certs["h"]).ok and again.certs["h"].order == w
    assert again.minors["m"].model.verify(small, directed_cycle(2)).ok
    grid = parse_dgf(serialize(doc)).grids["cyl"]
    assert grid.model.verify(doc.digraph, generate_cylindrical_grid(1)[0]).ok
    assert grid.witness.spokes == g.witness.spokes and grid.branch == g.branch


def test_acyclic_grid_block_round_trip():
    E, hs, vs = grid_disk(2, 2)
    g = get_acyclic_grid(RoutedSystem(E, hs, vs), 2)
    doc = DgfDocument("d", E.host, E, grids={"a": GridEntry("plain", g.model, g.witness, g.branch)})
    again = parse_dgf(serialize(doc)).grids["a"]
    assert again.witness == g.witness


@pytest.mark.parametrize(
    "text, line, col, needle",
    [
        ("digraph g\nv 0\ne 0 0 5\n", 3, 7, "unknown vertex 5"),
        ("digraph g\nv 0\nv 0\n", 3, 3, "duplicate vertex"),
        ("digraph g\nv x\n", 2, 3, "expected an integer"),
        ("digraph g\nv -1\n", 2, 3, "non-negative"),
        ("digraph g\nfoo 1\n", 2, 1, "unknown keyword"),
        ("digraph g\ndigraph h\n", 2, 1, "second 'digraph'"),
        ("digraph g\nv 0\nv 1\ne 0 0 1\ncircuit c 0 0 1\n", 5, 15, "end at its first vertex"),
        ("digraph g\nv 0\npath p 0 3 0\n", 3, 10, "unknown edge 3"),
        ("digraph g\nv 0\ncert h\n  order: 1\n", 3, 1, "not closed"),
        ("digraph g\nv 0\ncert h\n  order: 1\n  Z: -> 4\nend\n", 5, 9, "unknown vertex 4"),
        ("digraph g\nv 0\ncert h\n  Z: -> 0\nend\n", 3, 1, "no 'order:'"),
        ("v 0\n", 1, 1, "no 'digraph'"),
        ("digraph g\nv 0\nrot 0\n", 1, 1, "without an 'embedding'"),
        ("digraph g\nv 0\nv 1\ne 0 0 1\npath p 0 0\n", 5, 1, "odd number"),
        ("digraph g\nconfig\n  cut_order = x\nend\n", 3, 1, "integer"),
    ],
)
def test_errors_report_position(text, line, col, needle):
    with pytest.raises(DgfError) as info:
        parse_dgf(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert needle in str(info.value)
    assert str(info.value).startswith(f"line {line}, column {col}:")


@st.composite
def documents(draw):
    nv = draw(st.integers(1, 7))
    vs = draw(st.lists(st.integers(0, 40), min_size=nv, max_size=nv, unique=True))
    arcs = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)), max_size=12))
    D = Digraph(vs, ((3 * i + 1, t, h) for i, (t, h) in enumerate(arcs)))
    curves = {}
    for i, e in enumerate(draw(st.lists(st.sampled_from(sorted(D.edges)), max_size=3)) if D.edges else []):
        t, h = D.edges[e]
        curves[f"p{i}"] = Curve("path", (t, h), (e,))
    if draw(st.booleans()):
        curves["u"] = Curve("upath", tuple(draw(st.lists(st.sampled_from(vs), min_size=1, max_size=4))))
    cfg = PipelineConfig(cut_order=draw(st.integers(1, 9))) if draw(st.booleans()) else None
    return DgfDocument(draw(st.sampled_from(["g", "host", "x1"])), D, curves=curves, config=cfg)


@settings(max_examples=60, deadline=None)
@given(documents())
def test_round_trip_is_byte_identical(doc):
    text = serialize(doc)
    again = parse_dgf(text)
    assert serialize(again) == text
    assert again.digraph.key() == doc.digraph.key()
    assert again.curves == doc.curves and again.config == doc.config

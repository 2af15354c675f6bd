"""Command-line driver.

Every subcommand reads DGF (see :mod:`dirgrid.dgf`), prints a ``key: value``
report and exits with 0 (positive result), 1 (verified negative result),
2 (input error) or 3 (budget exhausted).  Witnesses go to ``--out FILE``;
``gen`` prints its document to stdout when no ``--out`` is given.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import dgf
from .dgf import Curve, DgfDocument, GridEntry, MinorEntry
from .digraph import Digraph, bidirected_complete, directed_cycle, directed_path, menger_paths, strong_components
from .embedding import grid_disk
from .errors import Budget, DirgridError, Exhausted, InvalidInput, Report
from .gridextract import (
    NotAssembled,
    CountingInconclusive,
    PipelineConfig,
    UndirectedWitness,
    assemble_cylindrical_grid,
    cylinder_witness,
    find_circuits_and_paths,
    get_acyclic_grid,
    get_bubble_grid,
    grid_parts,
    required_size,
)
from .havens import check_haven, haven_order
from .linkages import extract_linked_set
from .minors import (
    LoopEdge,
    NotContractible,
    butterfly_contract,
    find_butterfly_minor,
    generate_cylindrical_grid,
    validate_grid_witness,
)
from .rerouting import RerouteFailed, RoutedSystem, reroute_cylinder, reroute_disk

OK, NEGATIVE, INPUT_ERROR, EXHAUSTED = 0, 1, 2, 3


class _Out:
    def __init__(self, stream):
        self.stream = stream

    def __call__(self, key: str, value) -> None:
        if isinstance(value, (list, tuple, set, frozenset)):
            value = " ".join(str(x) for x in (sorted(value) if isinstance(value, (set, frozenset)) else value))
        print(f"{key}: {value}", file=self.stream)


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise InvalidInput(f"expected comma-separated integers, got {text!r}") from None


def _vertex_set(doc: DgfDocument, text: str) -> list[int]:
    """Comma list of vertex ids, or the name of a boundary mark."""
    E = doc.embedding
    if E is not None and text in E.marks:
        return list(E.marks[text])
    vs = _ints(text)
    bad = [v for v in vs if v not in doc.digraph]
    if bad:
        raise InvalidInput(f"unknown vertices {bad}")
    return vs


def _config(doc: DgfDocument) -> PipelineConfig:
    return doc.config or PipelineConfig()


def _write(path: str | None, doc: DgfDocument, out: _Out) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dgf.serialize(doc))
        out("output", path)


def pattern_digraph(spec: str) -> Digraph:
    """``digon``, ``cycle:K``, ``path:K``, ``complete:K``, ``cyl:K`` or ``file:PATH``."""
    if spec == "digon":
        return directed_cycle(2)
    kind, _, arg = spec.partition(":")
    if kind == "file":
        return dgf.read_dgf(arg).digraph
    makers = {
        "cycle": directed_cycle,
        "path": directed_path,
        "complete": bidirected_complete,
        "cyl": lambda k: generate_cylindrical_grid(k)[0],
    }
    if kind not in makers or not arg.isdigit():
        raise InvalidInput(f"unknown pattern {spec!r}")
    return makers[kind](int(arg))


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args, out):
    n = args.n
    if args.kind == "cyl":
        D, W, E = generate_cylindrical_grid(n)
        C, ins, outs = grid_parts(W)
        curves = {f"C{i}": Curve("circuit", P.vertices, P.edges) for i, P in enumerate(C, 1)}
        curves |= {f"in{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(ins, 1)}
        curves |= {f"out{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(outs, 1)}
        if args.undirected:
            U = cylinder_witness(W)
            curves |= {f"U{i}": Curve("ucircuit", c) for i, c in enumerate(U.circuits, 1)}
            curves |= {f"P{i}": Curve("upath", p) for i, p in enumerate(U.paths, 1)}
        doc = DgfDocument(f"cyl{n}", D, E, curves)
    elif args.kind == "disk":
        E, hs, vs = grid_disk(n, n)
        curves = {f"h{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(hs, 1)}
        curves |= {f"v{i}": Curve("path", P.vertices, P.edges) for i, P in enumerate(vs, 1)}
        doc = DgfDocument(f"disk{n}", E.host, E, curves)
    else:
        D = {"cycle": directed_cycle, "complete": bidirected_complete, "path": directed_path}[args.kind](n)
        doc = DgfDocument(f"{args.kind}{n}", D)
    if args.out:
        out("vertices", len(doc.digraph))
        out("edges", len(doc.digraph.edges))
        _write(args.out, doc, out)
    else:
        out.stream.write(dgf.serialize(doc))
    return OK


def cmd_scc(args, out):
    doc = dgf.read_dgf(args.file)
    comps = sorted(strong_components(doc.digraph), key=min)
    out("components", len(comps))
    for c in comps:
        out("component", c)
    return OK


def cmd_menger(args, out):
    doc = dgf.read_dgf(args.file)
    A, B = _vertex_set(doc, args.source), _vertex_set(doc, args.target)
    res = menger_paths(doc.digraph, A, B, args.k)
    out("linked", "yes" if res.linked else "no")
    if res.linked:
        for P in res.paths:
            out("path", P.vertices)
        return OK
    out("separator", res.separator)
    return NEGATIVE


def cmd_haven_order(args, out):
    doc = dgf.read_dgf(args.file)
    w, cert = haven_order(doc.digraph, args.cap, _config(doc).search_budget)
    out("order", w)
    out("capped", "yes" if w == args.cap else "no")
    _write(args.out, replace(doc, certs={**doc.certs, "haven": cert}), out)
    return OK


def cmd_check_haven(args, out):
    doc = dgf.read_dgf(args.cert)
    names = [args.name] if args.name else list(doc.certs)
    if not names or any(nm not in doc.certs for nm in names):
        raise InvalidInput("no such certificate in the document")
    code = OK
    for nm in names:
        cert = doc.certs[nm]
        rep = check_haven(doc.digraph, cert, all_pairs=args.all_pairs)
        out("cert", nm)
        out("order", cert.order)
        out("valid", "yes" if rep.ok else "no")
        for clause, detail in rep.violations:
            out("violation", f"{clause}: {detail}")
        if not rep.ok:
            code = NEGATIVE
    return code


def cmd_linked_set(args, out):
    doc = dgf.read_dgf(args.file)
    bud = Budget(_config(doc).search_budget, "linked-set")
    w, cert = haven_order(doc.digraph, 3 * args.n, bud)
    out("haven-order", w)
    if w < 3 * args.n:
        out("linked-set", "none")
        return NEGATIVE
    X = extract_linked_set(doc.digraph, args.n, cert, bud)
    out("linked-set", X)
    return OK


def cmd_contract(args, out):
    doc = dgf.read_dgf(args.file)
    try:
        D = butterfly_contract(doc.digraph, args.edge)
    except (NotContractible, LoopEdge) as exc:
        out("contractible", "no")
        out("reason", exc)
        return NEGATIVE
    out("contractible", "yes")
    out("vertices", len(D))
    out("edges", len(D.edges))
    _write(args.out, DgfDocument(doc.name, D, config=doc.config), out)
    return OK


def cmd_find_minor(args, out):
    doc = dgf.read_dgf(args.file)
    spec = args.pattern if ":" in args.pattern or args.pattern == "digon" else f"file:{args.pattern}"
    pattern = pattern_digraph(spec)
    model = find_butterfly_minor(doc.digraph, pattern, _config(doc).minor_budget)
    out("pattern", spec)
    if model is None:
        out("found", "no")
        return NEGATIVE
    out("found", "yes")
    out("script-length", len(model.script))
    _write(args.out, replace(doc, minors={**doc.minors, "found": MinorEntry(spec, model)}), out)
    return OK


def _routed(doc: DgfDocument) -> RoutedSystem:
    E = doc.embedding
    if E is None:
        raise InvalidInput("rerouting needs an embedding")
    if E.mode == "disk":
        return RoutedSystem(E, doc.paths("h"), doc.paths("v"))
    circuits = doc.paths(kind="circuit")
    return RoutedSystem(E, circuits, doc.paths())


def _routed_doc(doc: DgfDocument, S: RoutedSystem) -> DgfDocument:
    E = S.embedding
    if E.mode == "disk":
        named = [(f"h{i}", P) for i, P in enumerate(S.horizontals, 1)] + [
            (f"v{i}", P) for i, P in enumerate(S.verticals, 1)
        ]
    else:
        named = [(f"C{i}", P) for i, P in enumerate(S.horizontals, 1)] + [
            (f"p{i}", P) for i, P in enumerate(S.verticals, 1)
        ]
    curves = {nm: Curve("circuit" if P.vertices[0] == P.vertices[-1] and P.edges else "path", P.vertices, P.edges)
              for nm, P in named}
    return DgfDocument(doc.name, E.host, E, curves, config=doc.config)


def cmd_reroute(args, out):
    doc = dgf.read_dgf(args.file)
    S = _routed(doc)
    budget = _config(doc).reroute_budget
    try:
        if S.embedding.mode == "disk":
            model, S2 = reroute_disk(S, args.mode, budget)
        else:
            if args.mode != "exact":
                raise InvalidInput("cylinder rerouting has only the exact mode")
            model, S2 = reroute_cylinder(S, budget=budget)
    except RerouteFailed as exc:
        out("rerouted", "no")
        for clause, detail in exc.report.violations:
            out("violation", f"{clause}: {detail}")
        return NEGATIVE
    out("rerouted", "yes")
    out("script-length", len(model.script))
    out("edges-before", len(S.edges_used()))
    out("edges-after", len(S2.edges_used()))
    _write(args.out, _routed_doc(doc, S2), out)
    return OK


def _emit_grid(args, doc, g, out):
    out("branch", g.branch)
    out("script-length", len(g.model.script))
    out("grid-vertices", len(g.host))
    entry = GridEntry(g.witness.flavor if hasattr(g.witness, "flavor") else "cyl", g.model, g.witness, g.branch)
    _write(args.out, replace(doc, grids={**doc.grids, "grid": entry}), out)


def cmd_extract_acyclic(args, out):
    doc = dgf.read_dgf(args.file)
    S = _routed(doc)
    find = get_bubble_grid if args.bubble else get_acyclic_grid
    g = find(S, args.n, _config(doc).search_budget)
    out("size", g.witness.n)
    out("flavor", g.witness.flavor)
    _emit_grid(args, doc, g, out)
    return OK


def _assemble_inputs(doc: DgfDocument):
    if doc.embedding is None or doc.embedding.mode != "cylinder":
        raise InvalidInput("assembly needs a cylinder embedding")
    return doc.paths(kind="circuit"), doc.paths("in"), doc.paths("out")


def cmd_assemble(args, out):
    doc = dgf.read_dgf(args.file)
    C, ins, outs = _assemble_inputs(doc)
    cfg = _config(doc)
    g = assemble_cylindrical_grid(doc.embedding, C, ins, outs, args.n, cfg=cfg)
    out("size", g.witness.n)
    _emit_grid(args, doc, g, out)
    return OK


def cmd_pipeline(args, out):
    doc = dgf.read_dgf(args.file)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = PipelineConfig.from_text(fh.read())
    else:
        cfg = _config(doc)
    if doc.embedding is None or doc.embedding.mode != "cylinder":
        raise InvalidInput("the pipeline needs a cylinder embedding")
    W = UndirectedWitness(tuple(doc.undirected("ucircuit")), tuple(doc.undirected("upath")))
    m = required_size(args.n, cfg)
    try:
        found = find_circuits_and_paths(doc.embedding, W, cfg, m)
    except CountingInconclusive as exc:
        out("stage", "circuits")
        out("circuits", "inconclusive")
        out("reason", exc)
        return INPUT_ERROR
    out("linking", found.linking)
    out("orientation", "ccw" if found.orientation == 1 else "cw")
    out("circuits", len(found.circuits))
    if found.orientation == -1:
        # the grid would be a minor of the reversed digraph; the caller reverses explicitly
        raise InvalidInput("circuits run clockwise: reverse every edge and rerun")
    g = assemble_cylindrical_grid(doc.embedding, found.circuits, found.in_paths, found.out_paths, args.n, cfg=cfg)
    out("size", g.witness.n)
    _emit_grid(args, replace(doc, config=cfg), g, out)
    return OK


def cmd_check(args, out):
    """Re-verify every witness block of a document."""
    doc = dgf.read_dgf(args.file)
    D = doc.digraph
    bad = False
    for nm, cert in doc.certs.items():
        rep = check_haven(D, cert)
        out(f"cert {nm}", "ok" if rep.ok else rep)
        bad |= not rep.ok
    for nm, m in doc.minors.items():
        rep = m.model.verify(D, pattern_digraph(m.pattern))
        out(f"minor {nm}", "ok" if rep.ok else rep)
        bad |= not rep.ok
    for nm, g in doc.grids.items():
        rep = Report()
        try:
            H = g.model.replay(D)
        except InvalidInput as exc:
            rep.add("script", str(exc))
        else:
            rep.extend(validate_grid_witness(H, g.witness), "witness-")
            if g.kind == "cyl":
                rep.extend(g.model.verify(D, generate_cylindrical_grid(g.witness.n)[0]), "model-")
        out(f"grid {nm}", "ok" if rep.ok else rep)
        bad |= not rep.ok
    if not (doc.certs or doc.minors or doc.grids):
        raise InvalidInput("document carries no witness blocks")
    return NEGATIVE if bad else OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dirgrid", description="Havens, linkages, butterfly minors and grids.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, file=True):
        q = sub.add_parser(name, help=help_)
        if file:
            q.add_argument("file", help="input DGF document")
        q.set_defaults(fn=fn)
        return q

    q = add("gen", cmd_gen, "generate a DGF document", file=False)
    q.add_argument("kind", choices=("cyl", "disk", "cycle", "complete", "path"))
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--undirected", action="store_true", help="cyl: add the undirected cycle/path witness")
    q.add_argument("--out")
    add("scc", cmd_scc, "strong components")
    q = add("menger", cmd_menger, "k disjoint paths or a small separator")
    q.add_argument("--from", dest="source", required=True, help="vertex list or mark name")
    q.add_argument("--to", dest="target", required=True)
    q.add_argument("--k", type=int, required=True)
    q = add("haven-order", cmd_haven_order, "largest haven order up to a cap")
    q.add_argument("--cap", type=int, required=True)
    q.add_argument("--out")
    q = add("check-haven", cmd_check_haven, "check haven certificates", file=False)
    q.add_argument("cert", help="DGF document holding the digraph and cert blocks")
    q.add_argument("--name")
    q.add_argument("--all-pairs", action="store_true")
    q = add("linked-set", cmd_linked_set, "linked set of size 2n")
    q.add_argument("--n", type=int, required=True)
    q = add("contract", cmd_contract, "butterfly-contract one edge")
    q.add_argument("--edge", type=int, required=True)
    q.add_argument("--out")
    q = add("find-minor", cmd_find_minor, "search for a butterfly minor")
    q.add_argument("pattern", help="digon, cycle:K, path:K, complete:K, cyl:K or a DGF file")
    q.add_argument("--out")
    q = add("reroute", cmd_reroute, "reroute a routed system")
    q.add_argument("--mode", choices=("exact", "local"), default="exact")
    q.add_argument("--out")
    q = add("extract-acyclic", cmd_extract_acyclic, "acyclic grid from a disk system")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--bubble", action="store_true")
    q.add_argument("--out")
    q = add("assemble", cmd_assemble, "cylindrical grid from circuits and in/out paths")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out")
    q = add("pipeline", cmd_pipeline, "undirected witness to cylindrical grid")
    q.add_argument("--config")
    q.add_argument("--n", type=int, default=1)
    q.add_argument("--out")
    add("check", cmd_check, "re-verify every witness block")
    return p


def run_command(argv, stdout=None) -> int:
    stream = stdout or sys.stdout
    out = _Out(stream)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except Exhausted as exc:
        out("budget", "gave up" if isinstance(exc, NotAssembled) else "exhausted")
        out("detail", exc)
        return EXHAUSTED
    except (InvalidInput, OSError) as exc:
        out("error", exc)
        return INPUT_ERROR
    except DirgridError as exc:
        out("error", exc)
        return INPUT_ERROR


def main(argv=None) -> None:
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()

"""DGF: the line-based text format for digraphs, embeddings and witnesses.

A document is a sequence of lines; ``#`` starts a comment.  Top-level lines::

    digraph NAME
    v ID
    e EID TAIL HEAD
    embedding disk|cylinder
    outer EID +|-            hole EID +|-
    rot V E1 ... Ek
    mark ROLE V ...
    path NAME V E V ... V
    circuit NAME V E V ... V     (first vertex repeated at the end)
    ucircuit NAME V ...          (undirected cycle, vertices only)
    upath NAME V ...

Blocks run to a line holding only ``end``::

    cert NAME        haven certificate lines (``order: k``, ``Z: ... -> r``)
    minor NAME SPEC  minor model: ``del_v X``, ``del_e X``, ``contract X``, ``map V P``
    grid NAME KIND N [BRANCH]
                     a minor model as above plus the grid witness living in
                     the replayed digraph: ``circuit``/``spoke I J E`` lines
                     for KIND=cyl, ``path h.../v...`` lines for plain/bubble
    config           ``key = value`` lines of PipelineConfig

``serialize`` writes the canonical form: vertices, edges and rotations sorted
by id, curves in document order, then certificates, minors, grids, config.
Every id mentioned anywhere must be declared by a ``v`` or ``e`` line.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .digraph import Digraph, DirectedPath
from .embedding import CYLINDER_ROLES, DISK_ROLES, RotationEmbedding
from .errors import InvalidInput
from .gridextract.config import PipelineConfig
from .havens import HavenCertificate
from .minors import AcyclicGridWitness, CylGridWitness, MinorModel

STEP_OPS = ("del_v", "del_e", "contract")
CURVE_KINDS = ("path", "circuit", "ucircuit", "upath")
GRID_KINDS = ("cyl", "plain", "bubble")


class DgfError(InvalidInput):
    def __init__(self, msg: str, line: int, col: int = 1):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line, self.col = line, col


@dataclass(frozen=True)
class Curve:
    kind: str
    vertices: tuple[int, ...]
    edges: tuple[int, ...] = ()

    @property
    def path(self) -> DirectedPath:
        return DirectedPath(self.vertices, self.edges)


@dataclass(frozen=True)
class MinorEntry:
    pattern: str
    model: MinorModel


@dataclass(frozen=True)
class GridEntry:
    kind: str
    model: MinorModel
    witness: CylGridWitness | AcyclicGridWitness
    branch: str = ""


@dataclass
class DgfDocument:
    name: str
    digraph: Digraph
    embedding: RotationEmbedding | None = None
    curves: dict[str, Curve] = field(default_factory=dict)
    certs: dict[str, HavenCertificate] = field(default_factory=dict)
    minors: dict[str, MinorEntry] = field(default_factory=dict)
    grids: dict[str, GridEntry] = field(default_factory=dict)
    config: PipelineConfig | None = None

    def paths(self, prefix: str = "", kind: str = "path") -> list[DirectedPath]:
        """Curves of one kind whose name starts with ``prefix``, in document order."""
        return [c.path for k, c in self.curves.items() if c.kind == kind and k.startswith(prefix)]

    def undirected(self, kind: str) -> list[tuple[int, ...]]:
        return [c.vertices for c in self.curves.values() if c.kind == kind]


# ---------------------------------------------------------------------------
# parsing


class _Tokens:
    """Tokens of one line with their 1-based columns."""

    def __init__(self, raw: str, lineno: int):
        self.lineno = lineno
        self.items: list[tuple[str, int]] = []
        body = raw.split("#", 1)[0]
        i = 0
        while i < len(body):
            if body[i].isspace():
                i += 1
                continue
            j = i
            while j < len(body) and not body[j].isspace():
                j += 1
            self.items.append((body[i:j], i + 1))
            i = j

    def __len__(self):
        return len(self.items)

    def word(self, k: int) -> str:
        return self.items[k][0]

    def fail(self, msg: str, k: int | None = None):
        col = self.items[k][1] if k is not None and k < len(self.items) else 1
        raise DgfError(msg, self.lineno, col)

    def int(self, k: int) -> int:
        if k >= len(self.items):
            self.fail("missing integer", None)
        s, col = self.items[k]
        try:
            v = int(s)
        except ValueError:
            raise DgfError(f"expected an integer, got {s!r}", self.lineno, col) from None
        if v < 0:
            raise DgfError(f"ids must be non-negative, got {v}", self.lineno, col)
        return v

    def ints(self, start: int) -> list[int]:
        return [self.int(k) for k in range(start, len(self.items))]

    def arity(self, lo: int, hi: int | None = None):
        hi = lo if hi is None else hi
        if not lo <= len(self.items) <= hi:
            self.fail(f"{self.word(0)!r} takes {lo - 1}" + (f" to {hi - 1}" if hi != lo else "") + " arguments", None)


class _Refs:
    """Deferred id references, resolved once the whole document is read."""

    def __init__(self):
        self.vertices: list[tuple[int, int, int]] = []
        self.edges: list[tuple[int, int, int]] = []

    def vertex(self, t: _Tokens, k: int) -> int:
        v = t.int(k)
        self.vertices.append((v, t.lineno, t.items[k][1]))
        return v

    def edge(self, t: _Tokens, k: int) -> int:
        e = t.int(k)
        self.edges.append((e, t.lineno, t.items[k][1]))
        return e


def _alternating(t: _Tokens, refs: _Refs, start: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(t) - start
    if n < 1 or n % 2 == 0:
        t.fail("a path is V E V ... V with an odd number of ids", None)
    vs = tuple(refs.vertex(t, k) for k in range(start, len(t), 2))
    es = tuple(refs.edge(t, k) for k in range(start + 1, len(t), 2))
    return vs, es


def _name(t: _Tokens, k: int, taken, what: str) -> str:
    if k >= len(t):
        t.fail(f"{what} needs a name", None)
    name = t.word(k)
    if name in taken:
        t.fail(f"duplicate {what} name {name!r}", k)
    return name


def _model_line(t: _Tokens, refs: _Refs, script: list, vmap: dict) -> bool:
    op = t.word(0)
    if op in STEP_OPS:
        t.arity(2)
        # steps name host ids; contraction keeps the tail id, so every id is declared
        x = refs.vertex(t, 1) if op == "del_v" else refs.edge(t, 1)
        script.append((op, x))
        return True
    if op == "map":
        t.arity(3)
        v = refs.vertex(t, 1)
        if v in vmap:
            t.fail(f"vertex {v} mapped twice", 1)
        vmap[v] = t.int(2)
        return True
    return False


def _read_block(lines, i: int, opener: _Tokens) -> tuple[list[_Tokens], int]:
    body = []
    while i < len(lines):
        t = _Tokens(lines[i], i + 1)
        i += 1
        if not len(t):
            continue
        if len(t) == 1 and t.word(0) == "end":
            return body, i
        body.append(t)
    opener.fail(f"block {opener.word(0)!r} is not closed by 'end'", 0)


def parse_dgf(text: str) -> DgfDocument:
    """Parse a DGF document; errors carry line and column numbers."""
    lines = text.splitlines()
    refs = _Refs()
    name = None
    vs: dict[int, int] = {}
    es: dict[int, tuple[int, int]] = {}
    mode = None
    rotation: dict[int, tuple[int, ...]] = {}
    marks: dict[str, tuple[int, ...]] = {}
    darts: dict[str, tuple[int, bool]] = {}
    curves: dict[str, Curve] = {}
    certs: dict[str, HavenCertificate] = {}
    minors: dict[str, MinorEntry] = {}
    grids: dict[str, GridEntry] = {}
    config = None
    seen_config = False
    i = 0
    while i < len(lines):
        t = _Tokens(lines[i], i + 1)
        i += 1
        if not len(t):
            continue
        kw = t.word(0)
        if kw == "digraph":
            t.arity(2)
            if name is not None:
                t.fail("second 'digraph' line", 0)
            name = t.word(1)
        elif kw == "v":
            t.arity(2)
            v = t.int(1)
            if v in vs:
                t.fail(f"duplicate vertex {v}", 1)
            vs[v] = t.lineno
        elif kw == "e":
            t.arity(4)
            e = t.int(1)
            if e in es:
                t.fail(f"duplicate edge {e}", 1)
            es[e] = (refs.vertex(t, 2), refs.vertex(t, 3))
        elif kw == "embedding":
            t.arity(2)
            if mode is not None:
                t.fail("second 'embedding' line", 0)
            if t.word(1) not in ("disk", "cylinder"):
                t.fail(f"unknown embedding mode {t.word(1)!r}", 1)
            mode = t.word(1)
        elif kw in ("outer", "hole"):
            t.arity(3)
            if kw in darts:
                t.fail(f"second {kw!r} line", 0)
            if t.word(2) not in "+-" or len(t.word(2)) != 1:
                t.fail("dart direction must be + or -", 2)
            darts[kw] = (refs.edge(t, 1), t.word(2) == "+")
        elif kw == "rot":
            if len(t) < 2:
                t.fail("'rot' needs a vertex", None)
            v = refs.vertex(t, 1)
            if v in rotation:
                t.fail(f"second rotation for vertex {v}", 1)
            rotation[v] = tuple(refs.edge(t, k) for k in range(2, len(t)))
        elif kw == "mark":
            role = _name(t, 1, marks, "mark")
            marks[role] = tuple(refs.vertex(t, k) for k in range(2, len(t)))
        elif kw in ("path", "circuit"):
            nm = _name(t, 1, curves, "curve")
            cv, ce = _alternating(t, refs, 2)
            if kw == "circuit" and (len(ce) == 0 or cv[0] != cv[-1]):
                t.fail("a circuit must end at its first vertex", len(t) - 1)
            curves[nm] = Curve(kw, cv, ce)
        elif kw in ("ucircuit", "upath"):
            nm = _name(t, 1, curves, "curve")
            if len(t) < 3:
                t.fail(f"{kw!r} needs at least one vertex", None)
            curves[nm] = Curve(kw, tuple(refs.vertex(t, k) for k in range(2, len(t))))
        elif kw == "cert":
            t.arity(2)
            nm = _name(t, 1, certs, "cert")
            body, i = _read_block(lines, i, t)
            certs[nm] = _cert_block(t, body, refs)
        elif kw == "minor":
            nm = _name(t, 1, minors, "minor")
            if len(t) < 3:
                t.fail("'minor' needs a pattern", None)
            pattern = " ".join(t.word(k) for k in range(2, len(t)))
            body, i = _read_block(lines, i, t)
            script, vmap = [], {}
            for b in body:
                if not _model_line(b, refs, script, vmap):
                    b.fail(f"unexpected {b.word(0)!r} in a minor block", 0)
            minors[nm] = MinorEntry(pattern, MinorModel(tuple(script), vmap))
        elif kw == "grid":
            t.arity(4, 5)
            nm = _name(t, 1, grids, "grid")
            if t.word(2) not in GRID_KINDS:
                t.fail(f"grid kind must be one of {', '.join(GRID_KINDS)}", 2)
            body, i = _read_block(lines, i, t)
            grids[nm] = _grid_block(t, body, refs)
        elif kw == "config":
            t.arity(1)
            if seen_config:
                t.fail("second 'config' block", 0)
            seen_config = True
            body, i = _read_block(lines, i, t)
            try:
                config = PipelineConfig.from_text("\n".join(lines[b.lineno - 1] for b in body))
            except InvalidInput as exc:
                raise DgfError(str(exc), body[0].lineno if body else t.lineno) from None
        else:
            t.fail(f"unknown keyword {kw!r}", 0)
    if name is None:
        raise DgfError("document has no 'digraph' line", 1)
    for v, ln, col in refs.vertices:
        if v not in vs:
            raise DgfError(f"unknown vertex {v}", ln, col)
    for e, ln, col in refs.edges:
        if e not in es:
            raise DgfError(f"unknown edge {e}", ln, col)
    D = Digraph(vs, ((e, a, b) for e, (a, b) in es.items()))
    emb = None
    if mode is not None:
        emb = RotationEmbedding(D, rotation, mode, marks, darts.get("outer"), darts.get("hole"))
    elif rotation or marks or darts:
        raise DgfError("rotation data without an 'embedding' line", 1)
    return DgfDocument(name, D, emb, curves, certs, minors, grids, config)


def _cert_block(opener: _Tokens, body: list[_Tokens], refs: _Refs) -> HavenCertificate:
    order = None
    table: dict[frozenset, int] = {}
    for t in body:
        w = t.word(0)
        if w == "order:":
            t.arity(2)
            order = t.int(1)
        elif w == "Z:":
            words = [t.word(k) for k in range(len(t))]
            if words.count("->") != 1 or words[-2] != "->":
                t.fail("expected 'Z: V ... -> R'", None)
            Z = frozenset(refs.vertex(t, k) for k in range(1, len(t) - 2))
            if Z in table:
                t.fail("duplicate entry", 0)
            table[Z] = refs.vertex(t, len(t) - 1)
        else:
            t.fail(f"unexpected {w!r} in a cert block", 0)
    if order is None:
        opener.fail("certificate has no 'order:' line", 0)
    return HavenCertificate(order, table)


def _grid_block(opener: _Tokens, body: list[_Tokens], refs: _Refs) -> GridEntry:
    kind, n = opener.word(2), opener.int(3)
    branch = opener.word(4) if len(opener) == 5 else ""
    script, vmap = [], {}
    circuits, spokes, hs, vs = [], {}, [], []
    for t in body:
        if _model_line(t, refs, script, vmap):
            continue
        w = t.word(0)
        if kind == "cyl" and w == "circuit":
            cv, ce = _alternating(t, refs, 2)
            circuits.append(DirectedPath(cv, ce))
        elif kind == "cyl" and w == "spoke":
            t.arity(4)
            key = (t.int(1), t.int(2))
            if key in spokes:
                t.fail(f"duplicate spoke {key}", 1)
            spokes[key] = refs.edge(t, 3)
        elif kind != "cyl" and w == "path":
            nm = t.word(1) if len(t) > 1 else ""
            if nm[:1] not in ("h", "v"):
                t.fail("grid paths are named h... or v...", 1)
            cv, ce = _alternating(t, refs, 2)
            (hs if nm[0] == "h" else vs).append(DirectedPath(cv, ce))
        else:
            t.fail(f"unexpected {w!r} in a {kind} grid block", 0)
    if kind == "cyl":
        witness = CylGridWitness(n, tuple(circuits), spokes)
    else:
        witness = AcyclicGridWitness(n, tuple(hs), tuple(vs), kind)
    return GridEntry(kind, MinorModel(tuple(script), vmap), witness, branch)


# ---------------------------------------------------------------------------
# serialising


def _alt(P: DirectedPath) -> str:
    out = [str(P.vertices[0])]
    for e, v in zip(P.edges, P.vertices[1:]):
        out += [str(e), str(v)]
    return " ".join(out)


def _model_lines(model: MinorModel) -> list[str]:
    out = [f"  {op} {x}" for op, x in model.script]
    out += [f"  map {v} {p}" for v, p in sorted(model.vertex_map.items())]
    return out


def _role_order(E: RotationEmbedding) -> list[str]:
    known = DISK_ROLES if E.mode == "disk" else CYLINDER_ROLES
    return [r for r in known if r in E.marks] + sorted(r for r in E.marks if r not in known)


def serialize(doc: DgfDocument) -> str:
    D = doc.digraph
    out = [f"digraph {doc.name}"]
    out += [f"v {v}" for v in D.vertices]
    out += [f"e {e} {t} {h}" for e, (t, h) in D.edges.items()]
    E = doc.embedding
    if E is not None:
        out.append(f"embedding {E.mode}")
        for kw, d in (("outer", E.outer), ("hole", E.hole)):
            if d is not None:
                out.append(f"{kw} {d[0]} {'+' if d[1] else '-'}")
        for v in sorted(E.rotation):
            out.append(" ".join(["rot", str(v)] + [str(e) for e in E.rotation[v]]))
        for r in _role_order(E):
            out.append(" ".join(["mark", r] + [str(v) for v in E.marks[r]]))
    for nm, c in doc.curves.items():
        if c.kind in ("path", "circuit"):
            out.append(f"{c.kind} {nm} {_alt(c.path)}")
        else:
            out.append(" ".join([c.kind, nm] + [str(v) for v in c.vertices]))
    for nm, cert in doc.certs.items():
        out.append(f"cert {nm}")
        out += ["  " + ln for ln in cert.lines()]
        out.append("end")
    for nm, m in doc.minors.items():
        out.append(f"minor {nm} {m.pattern}")
        out += _model_lines(m.model)
        out.append("end")
    for nm, g in doc.grids.items():
        w = g.witness
        out.append(" ".join(x for x in ("grid", nm, g.kind, str(w.n), g.branch) if x))
        out += _model_lines(g.model)
        if g.kind == "cyl":
            out += [f"  circuit C{i} {_alt(C)}" for i, C in enumerate(w.circuits, 1)]
            out += [f"  spoke {i} {j} {e}" for (i, j), e in sorted(w.spokes.items())]
        else:
            out += [f"  path h{i} {_alt(P)}" for i, P in enumerate(w.horizontals, 1)]
            out += [f"  path v{i} {_alt(P)}" for i, P in enumerate(w.verticals, 1)]
        out.append("end")
    if doc.config is not None:
        out.append("config")
        out += ["  " + ln for ln in doc.config.to_text().splitlines()]
        out.append("end")
    return "\n".join(out) + "\n"


def read_dgf(path: str) -> DgfDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_dgf(fh.read())

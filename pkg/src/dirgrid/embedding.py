"""Combinatorial plane embeddings: rotation systems with disk or cylinder
boundary structure, side predicates and the bounce/cross classification.

Conventions
-----------
* ``rotation[v]`` lists the edges at ``v`` counter-clockwise.
* A dart is ``(edge, forward)``; forward darts run tail -> head.
* Face walks step from a dart into ``v`` to the ccw-successor of its edge at
  ``v``.  The face of a dart is therefore on the walker's *right*, inner faces
  are walked clockwise and the outer face counter-clockwise.
* A cylinder is a plane embedding with two marked faces: ``hole`` and
  ``outer``.  Separation and winding are read off a fixed dual path from the
  hole to the outer face instead of unrolling the annulus.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .digraph import Digraph, DirectedPath
from .errors import InvalidInput, Report

Dart = tuple[int, bool]
DISK_ROLES = ("T", "L", "B", "R")
CYLINDER_ROLES = ("T", "B")


class MeetingKind(enum.Enum):
    BOUNCE = "Bounce"
    CROSS = "Cross"


@dataclass(frozen=True, eq=False)
class RotationEmbedding:
    host: Digraph
    rotation: Mapping[int, tuple[int, ...]]
    mode: str = "disk"
    marks: Mapping[str, tuple[int, ...]] = field(default_factory=dict)
    outer: Dart | None = None
    hole: Dart | None = None

    def __post_init__(self):
        if self.mode not in ("disk", "cylinder"):
            raise InvalidInput(f"unknown embedding mode {self.mode!r}")
        object.__setattr__(self, "rotation", MappingProxyType({v: tuple(r) for v, r in self.rotation.items()}))
        object.__setattr__(self, "marks", MappingProxyType({k: tuple(v) for k, v in self.marks.items() if v}))
        object.__setattr__(self, "_faces", None)

    # -- structure ---------------------------------------------------------

    @property
    def roles(self) -> dict[int, str]:
        return {v: r for r, vs in self.marks.items() for v in vs}

    def boundary_sequence(self) -> tuple[int, ...]:
        """Declared boundary vertices in ccw order (disk: T, L, B, R)."""
        names = DISK_ROLES if self.mode == "disk" else CYLINDER_ROLES
        return tuple(v for r in names for v in self.marks.get(r, ()))

    def dart_tail(self, d: Dart) -> int:
        t, h = self.host.edges[d[0]]
        return t if d[1] else h

    def dart_head(self, d: Dart) -> int:
        t, h = self.host.edges[d[0]]
        return h if d[1] else t

    @staticmethod
    def twin(d: Dart) -> Dart:
        return (d[0], not d[1])

    def next_dart(self, d: Dart) -> Dart:
        v = self.dart_head(d)
        rot = self.rotation[v]
        e = rot[(rot.index(d[0]) + 1) % len(rot)]
        return (e, self.host.tail(e) == v)

    def darts(self) -> list[Dart]:
        return [(e, f) for e in sorted(self.host.edges) for f in (True, False)]

    def faces(self) -> list[tuple[Dart, ...]]:
        """Face walks, each starting from its least dart; sorted by that dart."""
        if self._faces is None:
            seen: set[Dart] = set()
            out = []
            for d in self.darts():
                if d in seen:
                    continue
                walk = []
                x = d
                while x not in seen:
                    seen.add(x)
                    walk.append(x)
                    x = self.next_dart(x)
                out.append(tuple(walk))
            object.__setattr__(self, "_faces", out)
            object.__setattr__(self, "_face_of", {d: i for i, f in enumerate(out) for d in f})
        return self._faces

    def face_of(self, d: Dart) -> int:
        self.faces()
        return self._face_of[d]

    def face_vertices(self, i: int) -> list[int]:
        return [self.dart_head(d) for d in self.faces()[i]]

    def outer_face(self) -> int | None:
        """Index of the outer face: the marked dart's face, else the face of the first boundary vertex."""
        if self.outer is not None:
            return self.face_of(self.outer)
        for v in self.boundary_sequence():
            for e in self.rotation.get(v, ()):
                return self.face_of((e, self.host.head(e) == v))
        return None

    def hole_face(self) -> int | None:
        return self.face_of(self.hole) if self.hole is not None else None

    # -- derived embeddings ------------------------------------------------

    def _survivor(self, d: Dart | None, gone: set[int]) -> Dart | None:
        if d is None:
            return None
        x = d
        for _ in range(2 * self.host.num_edges() + 1):
            if x[0] not in gone:
                return x
            x = self.next_dart(x)
        return None

    def _rebuild(self, host: Digraph, rotation, marks=None, outer=None, hole=None) -> "RotationEmbedding":
        marks = self.marks if marks is None else marks
        marks = {r: tuple(v for v in vs if v in host) for r, vs in marks.items()}
        return RotationEmbedding(host, rotation, self.mode, marks, outer, hole)

    def delete_edges(self, es: Iterable[int]) -> "RotationEmbedding":
        gone = set(es)
        host = self.host.delete_edges(gone)
        rot = {v: tuple(e for e in r if e not in gone) for v, r in self.rotation.items()}
        return self._rebuild(host, rot, outer=self._survivor(self.outer, gone), hole=self._survivor(self.hole, gone))

    def delete_vertices(self, vs: Iterable[int]) -> "RotationEmbedding":
        vs = set(vs)
        gone = {e for v in vs for e in self.rotation.get(v, ())}
        E = self.delete_edges(gone)
        host = E.host.delete_vertices(vs)
        rot = {v: r for v, r in E.rotation.items() if v not in vs}
        return E._rebuild(host, rot, outer=E.outer, hole=E.hole)

    def restrict(self, sub: Digraph) -> "RotationEmbedding":
        """Embedding induced on a subdigraph (same ids)."""
        E = self.delete_edges(set(self.host.edges) - set(sub.edges))
        return E.delete_vertices(set(self.host.vertices) - set(sub.vertices))

    def contract(self, e: int) -> "RotationEmbedding":
        """Contract ``e = (u, v)``; the merged vertex keeps ``u`` and loops are dropped."""
        if e not in self.host.edges:
            raise InvalidInput(f"no edge {e}")
        u, v = self.host.edges[e]
        if u == v:
            raise InvalidInput("cannot contract a loop")
        ru, rv = list(self.rotation[u]), list(self.rotation[v])
        i, j = ru.index(e), rv.index(e)
        spliced = ru[:i] + rv[j + 1:] + rv[:j] + ru[i + 1:]
        loops = {f for f in spliced if set(self.host.edges[f]) == {u, v}}
        gone = loops | {e}
        spliced = [f for f in spliced if f not in gone]
        edges = []
        for f, (t, h) in self.host.edges.items():
            if f in gone:
                continue
            edges.append((f, u if t == v else t, u if h == v else h))
        host = Digraph([x for x in self.host.vertices if x != v], edges)
        rot = {x: r for x, r in self.rotation.items() if x not in (u, v)}
        rot = {x: tuple(f for f in r if f not in gone) for x, r in rot.items()}
        rot[u] = tuple(spliced)
        marks = {}
        for r, vs in self.marks.items():
            keep = []
            for x in vs:
                y = u if x == v else x
                if y not in keep:
                    keep.append(y)
            marks[r] = tuple(keep)
        outer = self._survivor(self.outer, gone)
        hole = self._survivor(self.hole, gone)
        return RotationEmbedding(host, rot, self.mode, marks, outer, hole)

    def mirror(self) -> "RotationEmbedding":
        """Reflection: rotations reversed, L and R exchanged (T and B keep their sides)."""
        rot = {v: tuple(reversed(r)) for v, r in self.rotation.items()}
        marks = dict(self.marks)
        if self.mode == "disk":
            # the reflection reverses the ccw boundary order, so each role's
            # list is reversed and L/R trade places to keep T, L, B, R ccw
            marks = {
                "T": tuple(reversed(self.marks.get("T", ()))),
                "L": tuple(reversed(self.marks.get("R", ()))),
                "B": tuple(reversed(self.marks.get("B", ()))),
                "R": tuple(reversed(self.marks.get("L", ()))),
            }
        flip = lambda d: None if d is None else self.twin(d)
        return RotationEmbedding(self.host, rot, self.mode, marks, flip(self.outer), flip(self.hole))


# ---------------------------------------------------------------------------
# construction and validation


def embedding_from_coordinates(
    host: Digraph,
    pos: Mapping[int, tuple[float, float]],
    mode: str = "disk",
    marks: Mapping[str, Sequence[int]] | None = None,
    outer: Dart | None = None,
    hole: Dart | None = None,
    bends: Mapping[tuple[int, int], float] | None = None,
) -> RotationEmbedding:
    """Rotation system of a straight-line drawing.

    ``bends[(v, e)]`` overrides the departure angle of ``e`` at ``v``; use it
    for curved edges such as parallel arcs around a circle.
    """
    bends = bends or {}
    rot = {}
    for v in host.vertices:
        inc = sorted(set(host.out_edges(v)) | set(host.in_edges(v)))
        x0, y0 = pos[v]

        def angle(e):
            if (v, e) in bends:
                return bends[(v, e)] % (2 * math.pi)
            t, h = host.edges[e]
            w = h if t == v else t
            x1, y1 = pos[w]
            return math.atan2(y1 - y0, x1 - x0) % (2 * math.pi)

        rot[v] = tuple(sorted(inc, key=lambda e: (angle(e), e)))
    return RotationEmbedding(host, rot, mode, dict(marks or {}), outer, hole)


def _cyclic_subsequence(seq: Sequence[int], ref: Sequence[int]) -> bool:
    """Is ``seq`` a subsequence of some rotation of ``ref``?"""
    if not seq:
        return True
    pos = {v: i for i, v in enumerate(ref)}
    if any(v not in pos for v in seq) or len(set(seq)) != len(seq):
        return False
    idx = [pos[v] for v in seq]
    drops = sum(1 for a, b in zip(idx, idx[1:] + idx[:1]) if b <= a)
    return drops <= 1


def validate_embedding(E: RotationEmbedding) -> Report:
    r = Report()
    D = E.host
    for v in D.vertices:
        inc = sorted(set(D.out_edges(v)) | set(D.in_edges(v)))
        if sorted(E.rotation.get(v, ())) != inc:
            r.add("rotation", f"rotation at {v} does not list exactly its incident edges")
    for e, (t, h) in D.edges.items():
        if t == h:
            r.add("rotation", f"loop {e} cannot be embedded as a single edge-end pair")
    if set(E.rotation) - D.vertex_set:
        r.add("rotation", "rotation names vertices outside the host")
    if not r.ok:
        return r
    faces = E.faces()
    comp_of = {}
    for i, c in enumerate(D.weak_components()):
        for v in c:
            comp_of[v] = i
    ncomp = len(D.weak_components())
    fcount = [0] * ncomp
    for f in faces:
        fcount[comp_of[E.dart_tail(f[0])]] += 1
    for i, c in enumerate(D.weak_components()):
        ne = sum(1 for e, (t, h) in D.edges.items() if t in c)
        faces_i = fcount[i] if ne else 1
        if len(c) - ne + faces_i != 2:
            r.add("euler", f"component with {len(c)} vertices, {ne} edges and {faces_i} faces is not planar under this rotation")
    allowed = DISK_ROLES if E.mode == "disk" else CYLINDER_ROLES
    for role in E.marks:
        if role not in allowed:
            r.add("roles", f"role {role} not allowed in {E.mode} mode")
    seen: dict[int, str] = {}
    for role, vs in E.marks.items():
        for v in vs:
            if v not in D:
                r.add("roles", f"marked vertex {v} is not in the host")
            elif v in seen:
                r.add("roles", f"vertex {v} has two roles")
            seen[v] = role
    if not r.ok:
        return r
    sources = ("B", "R") if E.mode == "disk" else ("T",)
    for v, role in seen.items():
        want = (1, 0) if role in sources else (0, 1)
        if (D.out_degree(v), D.in_degree(v)) != want:
            r.add("degree", f"{role}-vertex {v} has out/in degree {D.out_degree(v)}/{D.in_degree(v)}, want {want[0]}/{want[1]}")
    if E.mode == "disk":
        if len(E.marks.get("T", ())) != len(E.marks.get("B", ())) or len(E.marks.get("L", ())) != len(E.marks.get("R", ())):
            r.add("sizes", "need |T| = |B| and |L| = |R|")
        ref = E.boundary_sequence()
        for c in D.weak_components():
            onb = [v for v in ref if v in c]
            if not onb:
                continue
            d0 = next((e, D.head(e) == onb[0]) for e in E.rotation[onb[0]])
            walk = [E.dart_head(d) for d in faces[E.face_of(d0)]]
            missing = [v for v in onb if v not in walk]
            if missing:
                r.add("boundary-face", f"boundary vertices {missing} are not on the outer face")
                continue
            order = [v for v in walk if v in seen]
            if not _cyclic_subsequence(order, ref):
                r.add("boundary-order", "boundary vertices are not counter-clockwise T, L, B, R")
        if E.outer is not None and ref:
            o = E.outer_face()
            if not set(ref) & set(E.face_vertices(o)):
                r.add("marked-face", "marked outer face carries no boundary vertex")
    else:
        if E.outer is None or E.hole is None:
            r.add("marked-face", "cylinder mode needs an outer and a hole face")
        elif E.outer_face() == E.hole_face():
            r.add("marked-face", "outer and hole faces coincide")
        else:
            if len(E.marks.get("T", ())) != len(E.marks.get("B", ())):
                r.add("sizes", "need |T| = |B|")
            fo, fh = set(E.face_vertices(E.outer_face())), set(E.face_vertices(E.hole_face()))
            T, B = set(E.marks.get("T", ())), set(E.marks.get("B", ()))
            if not ((T <= fo and B <= fh) or (T <= fh and B <= fo)):
                r.add("boundary-face", "T and B must lie on different marked faces")
    return r


# ---------------------------------------------------------------------------
# sides of a boundary-to-boundary path


def _ccw_between(rot: Sequence[int], a: int, b: int) -> set[int]:
    """Edges strictly after ``a`` and strictly before ``b`` going ccw."""
    i = rot.index(a)
    out = set()
    k = len(rot)
    for s in range(1, k):
        e = rot[(i + s) % k]
        if e == b:
            break
        out.add(e)
    return out


def _dart_sides(E: RotationEmbedding, P: DirectedPath) -> dict[Dart, int]:
    """Side of the face of every dart reachable from ``P`` without crossing it."""
    o = E.outer_face()
    if o is None:
        raise InvalidInput("embedding has no outer face")
    walk = E.faces()[o]
    ends = []
    for v in (P.start, P.finish):
        idx = [i for i, d in enumerate(walk) if E.dart_head(d) == v]
        if len(idx) != 1:
            raise InvalidInput(f"path end {v} must appear exactly once on the outer face")
        ends.append(idx[0])
    i_s, i_f = ends
    k = len(walk)
    dart_side: dict[Dart, int] = {}
    for s in range(k):
        d = walk[(i_s + 1 + s) % k]
        dart_side[d] = 1 if s < (i_f - i_s) % k else -1
    onP = set(P.edges)
    face_side: dict[int, int] = {}
    queue: deque = deque()

    def label(d: Dart, side: int):
        f = E.face_of(d)
        if f == o:
            if dart_side[d] != side:
                raise InvalidInput("path does not separate the boundary into two sides")
            return
        if f in face_side:
            if face_side[f] != side:
                raise InvalidInput("path does not separate the boundary into two sides")
            return
        face_side[f] = side
        queue.append(f)

    for e in P.edges:
        label((e, True), 1)
        label((e, False), -1)
    for d in walk:
        if d[0] not in onP:
            label(E.twin(d), dart_side[d])
    while queue:
        f = queue.popleft()
        for d in E.faces()[f]:
            if d[0] not in onP:
                label(E.twin(d), face_side[f])
    out = {}
    for d in E.darts():
        f = E.face_of(d)
        s = dart_side[d] if f == o else face_side.get(f)
        if s is not None:
            out[d] = s
    return out


def path_sides(E: RotationEmbedding, P: DirectedPath) -> dict[int, int]:
    """Side of every vertex off ``P``: ``+1`` right of ``P``, ``-1`` left.

    ``P`` must run between two vertices of the outer face; the outer face is
    split at its ends, the ccw stretch from start to finish lying on the
    right.  Raises if ``P`` does not split the embedding into two sides.
    """
    D = E.host
    pv = P.vertex_set()
    sides: dict[int, int] = {}
    for d, s in _dart_sides(E, P).items():
        v = E.dart_head(d)
        if v in pv:
            continue
        if sides.setdefault(v, s) != s:
            raise InvalidInput(f"vertex {v} lies on both sides of the path")
    # components not touching P's component fall back to declared boundary order
    ref = E.boundary_sequence()
    if P.start in ref and P.finish in ref:
        pos = {v: i for i, v in enumerate(ref)}
        a, b, n = pos[P.start], pos[P.finish], len(ref)
        for c in D.weak_components():
            if c & pv or all(v in sides for v in c):
                continue
            marks = [v for v in ref if v in c]
            if marks:
                s = 1 if 0 < (pos[marks[0]] - a) % n < (b - a) % n else -1
                for v in c:
                    sides.setdefault(v, s)
    return sides


def edge_sides(E: RotationEmbedding, P: DirectedPath) -> dict[int, int]:
    """Side of every edge off ``P`` (same convention as :func:`path_sides`)."""
    onP = set(P.edges)
    out: dict[int, int] = {}
    for (e, _), s in _dart_sides(E, P).items():
        if e not in onP:
            out[e] = s
    vs = path_sides(E, P)
    for e, (t, h) in E.host.edges.items():
        if e not in onP and e not in out:
            s = vs.get(t, vs.get(h))
            if s is not None:
                out[e] = s
    return out


def _order_curves(E: RotationEmbedding, curves: Sequence[DirectedPath], need: tuple[str, str]) -> list[int]:
    lo, hi = need
    sides = []
    for c in curves:
        s = path_sides(E, c)
        for v in E.marks.get(hi, ()):
            if v not in c.vertex_set() and s.get(v) != 1:
                raise InvalidInput(f"curve from {c.start} does not put {hi} on its right")
        for v in E.marks.get(lo, ()):
            if v not in c.vertex_set() and s.get(v) != -1:
                raise InvalidInput(f"curve from {c.start} does not put {lo} on its left")
        sides.append(s)
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            if curves[i].vertex_set() & curves[j].vertex_set():
                raise InvalidInput(f"curves {i} and {j} cross")
    n = len(curves)
    # i before j iff i lies on the low side of j
    before = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                vals = {sides[j].get(v) for v in curves[i].vertices}
                if len(vals) != 1 or None in vals:
                    raise InvalidInput(f"curve {i} is not on one side of curve {j}")
                before[i][j] = vals == {-1}
    for i in range(n):
        for j in range(i + 1, n):
            if before[i][j] == before[j][i]:
                raise InvalidInput(f"curves {i} and {j} are not consistently ordered")
    return sorted(range(n), key=lambda i: sum(before[i][j] for j in range(n) if j != i), reverse=True)


def left_right_order(E: RotationEmbedding, curves: Sequence[DirectedPath]) -> list[int]:
    """Indices of disjoint B-to-T curves from left to right."""
    return _order_curves(E, curves, ("L", "R"))


def top_bottom_order(E: RotationEmbedding, curves: Sequence[DirectedPath]) -> list[int]:
    """Indices of disjoint R-to-L curves from bottom to top."""
    return _order_curves(E, curves, ("B", "T"))


# ---------------------------------------------------------------------------
# bounce / cross


def _ends_at(P: DirectedPath, u: int) -> tuple[int, int]:
    """In- and out-edge of ``P`` at ``u``; errors at path ends."""
    if u not in P.vertex_set():
        raise InvalidInput(f"vertex {u} is not on the path")
    i = P.position(u)
    if P.is_circuit:
        k = len(P.edges)
        return P.edges[(i - 1) % k], P.edges[i % k]
    if i == 0 or i == len(P.vertices) - 1:
        raise InvalidInput(f"vertex {u} is an end of the path; sidedness is undefined")
    return P.edges[i - 1], P.edges[i]


def side_at(E: RotationEmbedding, P: DirectedPath, u: int, e: int) -> str:
    """``'top'`` or ``'bottom'``: where edge ``e`` leaves ``u`` relative to ``P``.

    Top is to the right of the walking direction (for a horizontal running
    from R to L that is the T side).
    """
    p_in, p_out = _ends_at(P, u)
    if e in (p_in, p_out):
        raise InvalidInput(f"edge {e} is an edge of the path")
    rot = E.rotation[u]
    if e not in rot:
        raise InvalidInput(f"edge {e} is not incident with {u}")
    return "bottom" if e in _ccw_between(rot, p_out, p_in) else "top"


def classify_meeting(E: RotationEmbedding, P: DirectedPath, Q: DirectedPath, u: int) -> MeetingKind:
    q_in, q_out = _ends_at(Q, u)
    p_in, p_out = _ends_at(P, u)
    if {q_in, q_out} & {p_in, p_out}:
        raise InvalidInput(f"paths share an edge at {u}")
    same = side_at(E, P, u, q_in) == side_at(E, P, u, q_out)
    return MeetingKind.BOUNCE if same else MeetingKind.CROSS


# ---------------------------------------------------------------------------
# cylinder: winding via a dual path


def dual_path(E: RotationEmbedding) -> list[Dart]:
    """Darts crossed on a shortest dual walk from the hole face to the outer face.

    Each entry ``d`` means: step from ``face_of(d)`` into ``face_of(twin(d))``.
    """
    h, o = E.hole_face(), E.outer_face()
    if h is None or o is None:
        raise InvalidInput("needs both marked faces")
    prev: dict[int, Dart | None] = {h: None}
    queue = deque([h])
    while queue:
        f = queue.popleft()
        if f == o:
            break
        for d in E.faces()[f]:
            g = E.face_of(E.twin(d))
            if g not in prev:
                prev[g] = d
                queue.append(g)
    if o not in prev:
        raise InvalidInput("marked faces lie in different components")
    out = []
    f = o
    while prev[f] is not None:
        d = prev[f]
        out.append(d)
        f = E.face_of(d)
    return out[::-1]


def winding(E: RotationEmbedding, edges: Iterable[int]) -> int:
    """Signed number of times a closed walk goes ccw around the hole."""
    count: dict[int, int] = {}
    for e in edges:
        count[e] = count.get(e, 0) + 1
    w = 0
    for d in dual_path(E):
        if d[0] in count:
            # crossing from the right face of the forward dart to its left
            # face means the walk has the hole on its left: ccw
            w += count[d[0]] * (-1 if d[1] else 1)
    return w


def separates(E: RotationEmbedding, edges: Iterable[int]) -> bool:
    """Does the closed walk on ``edges`` separate the hole from the outer face?"""
    return winding(E, edges) % 2 != 0


# ---------------------------------------------------------------------------
# fixtures


def grid_disk(h: int, v: int) -> tuple[RotationEmbedding, list[DirectedPath], list[DirectedPath]]:
    """``h`` horizontals (R to L) crossing ``v`` verticals (B to T) in a disk.

    Returns the embedding, the horizontals bottom to top and the verticals
    left to right.
    """
    if h < 1 or v < 1:
        raise InvalidInput("need at least one path of each kind")
    pos: dict[int, tuple[float, float]] = {}
    ids: dict[tuple, int] = {}

    def vid(key, xy):
        ids[key] = len(ids)
        pos[ids[key]] = xy
        return ids[key]

    for y in range(1, h + 1):
        for x in range(1, v + 1):
            vid(("c", x, y), (x, y))
    for x in range(1, v + 1):
        vid(("B", x), (x, 0))
        vid(("T", x), (x, h + 1))
    for y in range(1, h + 1):
        vid(("R", y), (v + 1, y))
        vid(("L", y), (0, y))
    arcs = []
    hor, ver = [], []
    for y in range(1, h + 1):
        seq = [ids[("R", y)]] + [ids[("c", x, y)] for x in range(v, 0, -1)] + [ids[("L", y)]]
        hor.append(seq)
        arcs += list(zip(seq, seq[1:]))
    for x in range(1, v + 1):
        seq = [ids[("B", x)]] + [ids[("c", x, y)] for y in range(1, h + 1)] + [ids[("T", x)]]
        ver.append(seq)
        arcs += list(zip(seq, seq[1:]))
    D = Digraph.from_arcs(arcs, range(len(ids)))
    marks = {
        "T": [ids[("T", x)] for x in range(v, 0, -1)],
        "L": [ids[("L", y)] for y in range(h, 0, -1)],
        "B": [ids[("B", x)] for x in range(1, v + 1)],
        "R": [ids[("R", y)] for y in range(1, h + 1)],
    }
    E = embedding_from_coordinates(D, pos, "disk", marks)
    return E, [DirectedPath.from_vertices(D, s) for s in hor], [DirectedPath.from_vertices(D, s) for s in ver]

"""Level decomposition of verticals against a stack of horizontals.

Horizontals are listed bottom to top and indexed ``1..h``; level ``0`` stands
for the start of a vertical (its B end) and level ``h+1`` for its end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from ..digraph import DirectedPath
from ..embedding import left_right_order, top_bottom_order
from ..errors import Budget, InvalidInput
from ..minors import hits_in_reverse
from ..rerouting import RoutedSystem

INTEGRATED = "integrated"
SEGREGATED = "segregated"


def level_map(horizontals: Sequence[DirectedPath]) -> dict[int, int]:
    return {v: j for j, H in enumerate(horizontals, 1) for v in H.vertices}


@dataclass
class SubpathDecomposition:
    """``V_i^j``: the last sub-path of ``V_i`` running from level ``j`` to
    level ``j+1`` with no inner vertex on a horizontal.

    ``spans[(i, j)] = (a, b)`` are vertex positions on ``V_i``; the pair is
    missing when the vertical never makes that step.
    """

    horizontals: tuple[DirectedPath, ...]
    verticals: tuple[DirectedPath, ...]
    spans: dict[tuple[int, int], tuple[int, int]] = field(default_factory=dict)

    @classmethod
    def of(cls, horizontals: Sequence[DirectedPath], verticals: Sequence[DirectedPath]) -> "SubpathDecomposition":
        hs, vs = tuple(horizontals), tuple(verticals)
        lv = level_map(hs)
        h = len(hs)
        spans = {}
        for i, V in enumerate(vs):
            # virtual level 0 at the start and h+1 at the end; a vertical
            # that starts (ends) on a horizontal gets an empty bottom (top) step
            marks = [(0, 0)] + [(p, lv[v]) for p, v in enumerate(V.vertices) if v in lv]
            marks.append((len(V.vertices) - 1, h + 1))
            for (a, ja), (b, jb) in zip(marks, marks[1:]):
                if jb == ja + 1:
                    spans[(i, ja)] = (a, b)
        return cls(hs, vs, spans)

    @property
    def h(self) -> int:
        return len(self.horizontals)

    def has(self, i: int, j: int) -> bool:
        return (i, j) in self.spans

    def sub(self, i: int, j: int) -> DirectedPath:
        a, b = self.spans[(i, j)]
        return self.verticals[i].subpath(a, b)

    def f(self, i: int, j: int) -> int:
        return self.verticals[i].vertices[self.spans[(i, j)][0]]

    def l(self, i: int, j: int) -> int:
        return self.verticals[i].vertices[self.spans[(i, j)][1]]


def _order_on(H: DirectedPath) -> dict[int, int]:
    return {v: p for p, v in enumerate(H.vertices)}


@dataclass
class MixingResult:
    """f/l vertices of every vertical on ``H_j`` and their order along it."""

    level: int
    horizontal: DirectedPath
    f: dict[int, int]
    l: dict[int, int]

    @property
    def order(self) -> list[tuple[str, int, int]]:
        """``(kind, vertical, vertex)`` triples sorted along the horizontal."""
        pos = _order_on(self.horizontal)
        items = [("f", i, v) for i, v in self.f.items()] + [("l", i, v) for i, v in self.l.items()]
        return sorted(items, key=lambda t: (pos[t[2]], t[0] == "l"))

    def _seq(self, S: Sequence[int], label: str) -> list[int] | None:
        S = sorted(S)
        if any(i not in self.f or i not in self.l for i in S):
            return None
        if label == INTEGRATED:
            return [v for i in reversed(S) for v in (self.f[i], self.l[i])]
        return [self.f[i] for i in reversed(S)] + [self.l[i] for i in reversed(S)]

    def holds(self, S: Sequence[int], label: str) -> bool:
        seq = self._seq(S, label)
        if seq is None:
            return False
        pos = _order_on(self.horizontal)
        ps = [pos[v] for v in seq]
        return all(a <= b for a, b in zip(ps, ps[1:]))

    def classify(self, S: Sequence[int]) -> set[str]:
        return {lab for lab in (INTEGRATED, SEGREGATED) if self.holds(S, lab)}

    def verify(self, S: Sequence[int], label: str) -> bool:
        """Re-check by walking the horizontal vertex by vertex."""
        seq = self._seq(S, label)
        if seq is None:
            return False
        k = 0
        for v in self.horizontal.vertices:
            while k < len(seq) and seq[k] == v:
                k += 1
        return k == len(seq)

    def largest_uniform(self, min_size: int = 1, budget: int | None = 1_000_000) -> tuple[str, tuple[int, ...]] | None:
        """Largest vertical subset with one classification (integrated first)."""
        bud = Budget.of(budget, "uniform subset")
        cand = sorted(set(self.f) & set(self.l))
        for k in range(len(cand), min_size - 1, -1):
            for S in combinations(cand, k):
                bud.tick()
                for lab in (INTEGRATED, SEGREGATED):
                    if self.holds(S, lab):
                        return lab, S
        return None


def mixing_of(dec: SubpathDecomposition, j: int) -> MixingResult:
    if not 1 <= j <= dec.h:
        raise InvalidInput(f"level {j} out of range 1..{dec.h}")
    H = dec.horizontals[j - 1]
    f = {i: dec.f(i, j) for i in range(len(dec.verticals)) if dec.has(i, j)}
    l = {i: dec.l(i, j - 1) for i in range(len(dec.verticals)) if dec.has(i, j - 1)}
    return MixingResult(j, H, f, l)


def ordered_families(S: RoutedSystem) -> tuple[tuple[DirectedPath, ...], tuple[DirectedPath, ...]]:
    """Horizontals bottom to top, verticals left to right."""
    E = S.embedding
    hs = tuple(S.horizontals[i] for i in top_bottom_order(E, S.horizontals))
    vs = tuple(S.verticals[i] for i in left_right_order(E, S.verticals))
    return hs, vs


def check_reverse(horizontals, verticals) -> None:
    for H in horizontals:
        for V in verticals:
            if not hits_in_reverse(H, V):
                raise InvalidInput("the horizontals and verticals do not hit in reverse")


def mixing_analysis(S: RoutedSystem, j: int) -> MixingResult:
    """Integrated / segregated bookkeeping on horizontal ``j`` (1 = bottom).

    Vertical indices in the result count from the left, starting at 0.
    """
    hs, vs = ordered_families(S)
    check_reverse(hs, vs)
    return mixing_of(SubpathDecomposition.of(hs, vs), j)

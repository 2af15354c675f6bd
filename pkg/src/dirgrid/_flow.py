"""Integer max-flow on a small residual network (Edmonds-Karp).

Arcs are explored in insertion order so results are deterministic.
"""
from __future__ import annotations

from collections import deque
from typing import Hashable

INF = float("inf")


class FlowNetwork:
    def __init__(self) -> None:
        self.index: dict[Hashable, int] = {}
        self.nodes: list[Hashable] = []
        self.adj: list[list[int]] = []
        # arc k and k^1 are mates
        self.head: list[int] = []
        self.cap: list[float] = []

    def node(self, x: Hashable) -> int:
        i = self.index.get(x)
        if i is None:
            i = self.index[x] = len(self.nodes)
            self.nodes.append(x)
            self.adj.append([])
        return i

    def add_arc(self, u: Hashable, v: Hashable, cap: float) -> int:
        a, b = self.node(u), self.node(v)
        k = len(self.head)
        self.head += [b, a]
        self.cap += [cap, 0]
        self.adj[a].append(k)
        self.adj[b].append(k + 1)
        return k

    def flow_on(self, k: int) -> float:
        return self.cap[k + 1]

    def max_flow(self, s: Hashable, t: Hashable, limit: float = INF) -> float:
        si, ti = self.node(s), self.node(t)
        total = 0
        while total < limit:
            parent = {si: -1}
            q = deque([si])
            while q and ti not in parent:
                u = q.popleft()
                for k in self.adj[u]:
                    w = self.head[k]
                    if self.cap[k] > 0 and w not in parent:
                        parent[w] = k
                        q.append(w)
            if ti not in parent:
                break
            push = limit - total
            w = ti
            while w != si:
                k = parent[w]
                push = min(push, self.cap[k])
                w = self.head[k ^ 1]
            w = ti
            while w != si:
                k = parent[w]
                self.cap[k] -= push
                self.cap[k ^ 1] += push
                w = self.head[k ^ 1]
            total += push
        return total

    def reachable(self, s: Hashable) -> set[Hashable]:
        """Nodes reachable from ``s`` in the residual network."""
        si = self.node(s)
        seen = {si}
        stack = [si]
        while stack:
            u = stack.pop()
            for k in self.adj[u]:
                w = self.head[k]
                if self.cap[k] > 0 and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return {self.nodes[i] for i in seen}

"""Path metrics of finite edge-weighted trees and their 1-negative type gap."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import NonpositiveWeight, NotATree, TooFewPoints
from .metric_core import Mode, SemiMetricSpace, build_space


@dataclass(frozen=True)
class WeightedTree:
    vertex_count: int
    edges: tuple  # ((u, v, weight), ...)

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        )
        validate_tree(self)

    @classmethod
    def from_json(cls, obj) -> "WeightedTree":
        return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))

    def to_json(self) -> dict:
        return {"n": self.vertex_count, "edges": [list(e) for e in self.edges]}


def validate_tree(tree: WeightedTree) -> None:
    n = tree.vertex_count
    if n < 1:
        raise NotATree("a tree needs at least one vertex")
    for u, v, w in tree.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise NotATree(f"edge ({u}, {v}) refers to a vertex outside 0..{n - 1}")
        if u == v:
            raise NotATree(f"self-loop at vertex {u}")
        if not w > 0 or not np.isfinite(w):
            raise NonpositiveWeight(f"edge ({u}, {v}) has weight {w!r}")
    # Union-find catches the first cycle.
    parent = list(range(n))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in tree.edges:
        ru, rv = root(u), root(v)
        if ru == rv:
            raise NotATree(f"edge ({u}, {v}) closes a cycle")
        parent[ru] = rv
    if len(tree.edges) != n - 1:
        missing = next(x for x in range(n) if root(x) != root(0))
        raise NotATree(f"graph is disconnected: vertex {missing} is not reachable from 0")


def tree_metric(tree: WeightedTree) -> SemiMetricSpace:
    """All-pairs path distances, computed by a traversal from every vertex."""
    n = tree.vertex_count
    adj = [[] for _ in range(n)]
    for u, v, w in tree.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    d = np.zeros((n, n))
    for src in range(n):
        seen = [False] * n
        seen[src] = True
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y, w in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    d[src, y] = d[src, x] + w
                    queue.append(y)
    # Summation order differs between the two traversal directions.
    d = np.minimum(d, d.T)
    return build_space(d, Mode.METRIC)


def tree_one_gap(tree: WeightedTree) -> float:
    """Normalized 1-negative type gap: reciprocal of the sum of reciprocal edge weights."""
    if tree.vertex_count < 2:
        raise TooFewPoints("tree_one_gap needs at least 2 vertices")
    return 1.0 / sum(1.0 / w for _, _, w in tree.edges)

"""Graph container, seeded random generators, and structural reductions.

Vertices are 0-based integers internally; instance files and reports use
1-based labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with optional per-vertex weights."""

    n: int
    edges: frozenset[tuple[int, int]]
    weights: tuple[float, ...] | None = None

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge ({u},{v}) for n={self.n}")
        if self.weights is not None and len(self.weights) != self.n:
            raise ValueError("weights length must equal n")

    @staticmethod
    def from_edges(n, edge_list, weights=None):
        edges = frozenset((min(u, v), max(u, v)) for u, v in edge_list)
        w = None if weights is None else tuple(float(x) for x in weights)
        return Graph(n, edges, w)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, u: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == u:
                out.add(b)
            elif b == u:
                out.add(a)
        return out

    def adjacency_masks(self) -> list[int]:
        """Bitmask per vertex of its neighbourhood (excluding itself)."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    def weight_of(self, u: int) -> float:
        return 1.0 if self.weights is None else self.weights[u]


def worked_example_graph() -> Graph:
    """The 5-vertex, 3-edge worked-example graph (1-based edges 1-3, 1-5, 3-4)."""
    return Graph.from_edges(5, [(0, 2), (0, 4), (2, 3)])


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n, p) via the geometric skip-ahead over the C(n,2) pair sequence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    if p == 0.0:
        return Graph(n, frozenset())
    if p == 1.0:
        return Graph(n, frozenset((u, v) for v in range(n) for u in range(v)))
    rng = np.random.default_rng(seed)
    edges = []
    lp = math.log(1.0 - p)
    v, w = 1, -1
    while v < n:
        r = rng.random()
        w = w + 1 + int(math.log(1.0 - r) / lp)
        while w >= v and v < n:
            w -= v
            v += 1
        if v < n:
            edges.append((w, v))
    return Graph.from_edges(n, edges)


def gen_unit_disk(n: int, p: float, seed: int) -> tuple[Graph, np.ndarray]:
    """Random unit-disk graph hitting the target edge density exactly.

    Points are uniform in the unit square; the disk radius is the
    ceil(p*C(n,2))-th smallest pairwise distance, so the realized number of
    edges equals ceil(p*C(n,2)) up to distance ties.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < p <= 1.0:
        raise ValueError("p must be in (0, 1]")
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    if n == 1:
        return Graph(1, frozenset()), pos
    pairs = [(u, v) for v in range(n) for u in range(v)]
    dists = np.array([np.linalg.norm(pos[u] - pos[v]) for u, v in pairs])
    k = math.ceil(p * len(pairs))
    r = np.sort(dists)[k - 1]
    edges = [pairs[i] for i in range(len(pairs)) if dists[i] <= r]
    return Graph.from_edges(n, edges), pos


def complement(g: Graph) -> Graph:
    edges = frozenset(
        (u, v) for v in range(g.n) for u in range(v) if (u, v) not in g.edges
    )
    return Graph(g.n, edges, g.weights)


def line_graph(g: Graph) -> tuple[Graph, dict[int, tuple[int, int]]]:
    """Line graph L(g) plus the map from L-vertex index to original edge."""
    orig = sorted(g.edges)
    index_map = {i: e for i, e in enumerate(orig)}
    edges = []
    for i in range(len(orig)):
        for j in range(i + 1, len(orig)):
            if set(orig[i]) & set(orig[j]):
                edges.append((i, j))
    return Graph.from_edges(len(orig), edges), index_map


def is_independent_set(g: Graph, s) -> bool:
    s = set(s)
    if any(not 0 <= u < g.n for u in s):
        raise ValueError("vertex out of range")
    return all(not (min(u, v), max(u, v)) in g.edges
               for u in s for v in s if u < v)


def induced_positive_subgraph(g: Graph, duals) -> tuple[Graph, dict[int, int]]:
    """Subgraph on vertices with strictly positive dual, weighted by the duals.

    Returns the subgraph and the old->new vertex index map.
    """
    duals = list(duals)
    if len(duals) != g.n:
        raise ValueError("dual vector length must equal n")
    kept = [u for u in range(g.n) if duals[u] > 0]
    vmap = {u: i for i, u in enumerate(kept)}
    edges = [(vmap[u], vmap[v]) for u, v in g.edges if u in vmap and v in vmap]
    weights = tuple(duals[u] for u in kept)
    return Graph.from_edges(len(kept), edges, weights), vmap


def to_json_dict(g: Graph) -> dict:
    """Graph as a JSON-ready dict with 1-based vertex labels."""
    out = {"n": g.n, "edges": [[u + 1, v + 1] for u, v in sorted(g.edges)]}
    if g.weights is not None:
        out["weights"] = list(g.weights)
    return out


def from_json_dict(d: dict) -> Graph:
    edges = [(u - 1, v - 1) for u, v in d["edges"]]
    return Graph.from_edges(d["n"], edges, d.get("weights"))


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_json_dict(g), f, indent=1, sort_keys=True)
        f.write("\n")


def load_graph(path) -> Graph:
    with open(path, encoding="utf-8") as f:
        return from_json_dict(json.load(f))

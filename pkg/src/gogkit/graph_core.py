"""Finite directed graphs, spanning trees, tree paths, and sign classification."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import Disconnected, SameVertex

POSITIVE = "positive"
NEUTRAL = "neutral"
NEGATIVE = "negative"


@dataclass(frozen=True)
class FiniteGraph:
    """A finite directed graph; d0/d1 are the initial/terminal vertex maps."""

    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    d0: dict[str, str]
    d1: dict[str, str]

    def __post_init__(self):
        vs = set(self.vertices)
        for e in self.edges:
            if e not in self.d0 or e not in self.d1:
                raise ValueError(f"edge {e!r} is missing an endpoint map")
            if self.d0[e] not in vs or self.d1[e] not in vs:
                raise ValueError(f"edge {e!r} has an endpoint outside the vertex set")

    def incident(self, v: str) -> list[str]:
        """Edges touching v, in edge-id order."""
        return [e for e in sorted(self.edges) if v in (self.d0[e], self.d1[e])]

    def other_end(self, e: str, v: str) -> str:
        """The endpoint of e across from v (v itself for a loop)."""
        return self.d1[e] if self.d0[e] == v else self.d0[e]

    def is_loop(self, e: str) -> bool:
        return self.d0[e] == self.d1[e]


@dataclass(frozen=True)
class SpanningTree:
    """A spanning edge subset of a connected graph."""

    graph: FiniteGraph
    edges: frozenset[str]

    def __contains__(self, e: str) -> bool:
        return e in self.edges


def _components(g: FiniteGraph) -> list[list[str]]:
    remaining = set(g.vertices)
    comps = []
    while remaining:
        root = min(remaining)
        seen = {root}
        frontier = [root]
        while frontier:
            nxt = []
            for v in frontier:
                for e in g.incident(v):
                    w = g.other_end(e, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        comps.append(sorted(seen))
        remaining -= seen
    return comps


def spanning_tree(g: FiniteGraph) -> SpanningTree:
    """Breadth-first spanning tree rooted at the least vertex id, ties by edge id."""
    comps = _components(g)
    if len(comps) != 1:
        raise Disconnected(comps)
    root = min(g.vertices)
    visited = {root}
    tree: set[str] = set()
    queue = [root]
    while queue:
        nxt = []
        for v in queue:
            for e in g.incident(v):
                w = g.other_end(e, v)
                if w not in visited:
                    visited.add(w)
                    tree.add(e)
                    nxt.append(w)
        queue = sorted(nxt)
    return SpanningTree(g, frozenset(tree))


def _tree_adjacency(t: SpanningTree) -> dict[str, list[tuple[str, str]]]:
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in t.graph.vertices}
    for e in sorted(t.edges):
        a, b = t.graph.d0[e], t.graph.d1[e]
        adj[a].append((e, b))
        adj[b].append((e, a))
    return adj


def tree_path_oriented(t: SpanningTree, v: str, w: str) -> list[tuple[str, int]]:
    """The unique tree path v → w as (edge, direction) pairs.

    Direction +1 means the edge is crossed from d0 to d1.
    """
    if v == w:
        return []
    adj = _tree_adjacency(t)
    prev: dict[str, tuple[str, str]] = {}
    seen = {v}
    frontier = [v]
    while frontier and w not in seen:
        nxt = []
        for x in frontier:
            for e, y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    prev[y] = (e, x)
                    nxt.append(y)
        frontier = nxt
    if w not in seen:
        raise ValueError(f"no tree path between {v!r} and {w!r}")
    path = []
    cur = w
    while cur != v:
        e, parent = prev[cur]
        direction = 1 if t.graph.d0[e] == parent else -1
        path.append((e, direction))
        cur = parent
    return path[::-1]


def tree_path(t: SpanningTree, v: str, w: str) -> list[str]:
    """Edge ids along the unique tree path from v to w (empty when v == w)."""
    return [e for e, _ in tree_path_oriented(t, v, w)]


@dataclass(frozen=True)
class SignClassification:
    """Signs of vertices and edges relative to a base vertex and its exit edge."""

    base_vertex: str
    base_edge: str
    vertex_signs: dict[str, str]
    edge_signs: dict[str, str]


def classify(t: SpanningTree, v: str, w: str) -> SignClassification:
    """Classify vertices and edges relative to v and the first edge toward w.

    A vertex τ is positive when the tree path [v, τ] passes through the base
    edge e (the unique edge of [v, w] at v); v itself is neutral; the rest are
    negative.  An edge is positive when both endpoints are positive, neutral
    when exactly one endpoint is positive, negative otherwise.
    """
    if v == w:
        raise SameVertex(f"classification needs two distinct vertices, got {v!r} twice")
    base_edge = tree_path(t, v, w)[0]
    vertex_signs: dict[str, str] = {}
    for tau in t.graph.vertices:
        if tau == v:
            vertex_signs[tau] = NEUTRAL
        elif base_edge in tree_path(t, v, tau):
            vertex_signs[tau] = POSITIVE
        else:
            vertex_signs[tau] = NEGATIVE
    edge_signs: dict[str, str] = {}
    for e in t.graph.edges:
        ends = (vertex_signs[t.graph.d0[e]], vertex_signs[t.graph.d1[e]])
        positives = sum(1 for s in ends if s == POSITIVE)
        if positives == 2:
            edge_signs[e] = POSITIVE
        elif positives == 1:
            edge_signs[e] = NEUTRAL
        else:
            edge_signs[e] = NEGATIVE
    return SignClassification(v, base_edge, vertex_signs, edge_signs)

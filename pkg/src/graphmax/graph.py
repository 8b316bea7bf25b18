"""Simple connected finite graphs with their hop metric.

Vertices are the dense indices ``0..n-1``. The distance table is computed
once, by breadth-first search from every vertex, when the graph is built.

Labeling of the named families:

* ``complete``  -- every pair ``i < j`` is an edge.
* ``star``      -- vertex 0 is the center, ``1..n-1`` are the leaves.
* ``path``      -- edges ``i -- i+1``.
* ``cycle``     -- edges ``i -- (i+1) mod n``.
* ``hypercube`` -- vertex ``v`` is a bitmask of ``size`` bits; edges join
  masks differing in exactly one bit.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import (
    DisconnectedGraphError,
    DuplicateEdgeError,
    GraphValidationError,
    InvalidParameterError,
    SelfLoopError,
)

FAMILIES = ("complete", "star", "path", "cycle", "hypercube")

VertexSet = frozenset


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    dist: np.ndarray = field(repr=False)
    name: str = ""

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and set(self.edges) == set(other.edges)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.edges)))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for u, v in self.edges:
            a[u, v] = a[v, u] = True
        a.setflags(write=False)
        return a

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(np.flatnonzero(row).tolist()) for row in self.adjacency)

    @cached_property
    def degrees(self) -> np.ndarray:
        d = self.adjacency.sum(axis=1)
        d.setflags(write=False)
        return d

    @cached_property
    def eccentricities(self) -> np.ndarray:
        e = self.dist.max(axis=1)
        e.setflags(write=False)
        return e

    @cached_property
    def diameter(self) -> int:
        return int(self.dist.max())

    @cached_property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` integer array (empty graphs give shape ``(0, 2)``)."""
        arr = np.array(self.edges, dtype=np.intp).reshape(-1, 2)
        arr.setflags(write=False)
        return arr

    @cached_property
    def averaging_operators(self) -> np.ndarray:
        """Stack ``A[r]`` of ball-averaging matrices for ``r = 0..diameter``.

        Row ``v`` of ``A[r]`` is the uniform probability vector on ``B(v, r)``.
        Radii past ``eccentricity(v)`` repeat the full vertex set, so taking a
        maximum over the whole stack equals the maximum over ``0..ecc(v)``.
        """
        radii = np.arange(self.diameter + 1)
        member = (self.dist[None, :, :] <= radii[:, None, None]).astype(float)
        ops = member / member.sum(axis=2, keepdims=True)
        ops.setflags(write=False)
        return ops

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_edge_list_text(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def _bfs_distances(n: int, neighbors: list[list[int]]) -> np.ndarray:
    dist = np.full((n, n), -1, dtype=np.int64)
    for s in range(n):
        dist[s, s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in neighbors[u]:
                if dist[s, w] < 0:
                    dist[s, w] = dist[s, u] + 1
                    queue.append(w)
    return dist


def from_edge_list(n: int, pairs: Iterable[tuple[int, int]], name: str = "") -> Graph:
    """Validate an edge list and build the graph with its distance table.

    Raises:
        InvalidParameterError: ``n < 1`` or an endpoint out of range.
        SelfLoopError, DuplicateEdgeError, DisconnectedGraphError: the edge
            list is not a simple connected graph; the message names the
            offending edge or vertex.
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"vertex count must be a positive integer, got {n!r}")
    n = int(n)
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    neighbors: list[list[int]] = [[] for _ in range(n)]
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if not (0 <= u < n and 0 <= v < n):
            raise InvalidParameterError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
        neighbors[u].append(v)
        neighbors[v].append(u)
    dist = _bfs_distances(n, neighbors)
    unreachable = np.flatnonzero(dist[0] < 0)
    if unreachable.size:
        raise DisconnectedGraphError(
            f"graph is disconnected: vertex {int(unreachable[0])} is unreachable from vertex 0"
        )
    dist.setflags(write=False)
    return Graph(n=n, edges=tuple(sorted(edges)), dist=dist, name=name)


def build_named(family: str, size: int) -> Graph:
    """Canonical member of a named family (see the module docstring for labels).

    ``size`` is the vertex count, except for ``hypercube`` where it is the
    dimension and the graph has ``2**size`` vertices.
    """
    if family not in FAMILIES:
        raise InvalidParameterError(f"unknown family {family!r}; expected one of {FAMILIES}")
    size = int(size)
    if family == "hypercube":
        if size < 1:
            raise InvalidParameterError("hypercube dimension must be >= 1")
        n = 1 << size
        pairs = [(v, v ^ (1 << b)) for v in range(n) for b in range(size) if v < v ^ (1 << b)]
        return from_edge_list(n, pairs, name=f"Q{size}")
    minimum = 3 if family == "cycle" else 2
    if size < minimum:
        raise InvalidParameterError(f"{family} needs size >= {minimum}, got {size}")
    if family == "complete":
        pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
        tag = "K"
    elif family == "star":
        pairs = [(0, j) for j in range(1, size)]
        tag = "S"
    elif family == "path":
        pairs = [(i, i + 1) for i in range(size - 1)]
        tag = "P"
    else:
        pairs = [(i, (i + 1) % size) for i in range(size)]
        tag = "C"
    return from_edge_list(size, pairs, name=f"{tag}{size}")


def parse_graph_spec(text: str) -> Graph:
    """Parse ``family:size`` (e.g. ``star:5``) or a path to an edge-list/JSON file."""
    if ":" in text and text.split(":", 1)[0] in FAMILIES:
        family, size = text.split(":", 1)
        return build_named(family, int(size))
    return read_graph(text)


def read_graph(path: str | Path) -> Graph:
    """Read a graph from ``.json`` (``{"n":..,"edges":[[u,v],..]}``) or edge-list text."""
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json":
        return graph_from_json(text)
    return graph_from_edge_list_text(text)


def graph_from_json(text: str) -> Graph:
    data = json.loads(text)
    return from_edge_list(data["n"], [tuple(e) for e in data["edges"]])


def graph_from_edge_list_text(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphValidationError("edge-list header must be 'n m'")
    n, m = int(rows[0][0]), int(rows[0][1])
    body = rows[1:]
    if len(body) != m:
        raise GraphValidationError(f"header announces {m} edges but {len(body)} lines follow")
    return from_edge_list(n, [(int(u), int(v)) for u, v in body])


def ball(g: Graph, v: int, r: int) -> VertexSet:
    """Vertices at hop distance at most ``r`` from ``v``."""
    if not 0 <= v < g.n:
        raise InvalidParameterError(f"vertex {v} out of range 0..{g.n - 1}")
    if r < 0:
        raise InvalidParameterError("radius must be non-negative")
    return frozenset(np.flatnonzero(g.dist[v] <= r).tolist())


class Geometry(NamedTuple):
    diameter: int
    omega: VertexSet
    eccentricities: tuple[int, ...]


def geometry(g: Graph) -> Geometry:
    """Diameter, the set of vertices realizing it, and all eccentricities."""
    ecc = g.eccentricities
    omega = frozenset(np.flatnonzero(ecc == g.diameter).tolist())
    return Geometry(g.diameter, omega, tuple(int(e) for e in ecc))


def min_degree_vertex(g: Graph, subset: Iterable[int]) -> int:
    """Minimum-degree vertex of ``subset``; ties go to the smallest index."""
    members = sorted(set(subset))
    if not members:
        raise InvalidParameterError("subset must be nonempty")
    return min(members, key=lambda v: (int(g.degrees[v]), v))

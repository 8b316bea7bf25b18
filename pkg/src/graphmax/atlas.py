"""All connected simple graphs on a few vertices, and a scan of their constants.

Graphs are generated by vertex augmentation: every connected graph on ``n``
vertices has a non-cut vertex, so it arises from a connected graph on
``n - 1`` vertices by adding one vertex joined to a nonempty neighbor set.
Duplicates are removed with an exhaustive canonical code (the smallest
upper-triangle adjacency bit string over all ``n!`` relabelings).
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .constants import max_delta_variation_ratio
from .errors import BudgetExceededError, InvalidParameterError
from .graph import Graph, from_edge_list, geometry, min_degree_vertex
from .search import SearchConfig, SearchResult, ascent_variation, grid_oracle_variation

MAX_ENUMERATION_N = 7
MAX_SCAN_N = 6
GRID_ORACLE_MAX_N = 4


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


@lru_cache(maxsize=None)
def _code_tables(n: int):
    iu, ju = np.triu_indices(n, 1)
    perms = _permutations(n)
    rows, cols = perms[:, iu], perms[:, ju]
    weights = (1 << np.arange(iu.size - 1, -1, -1)).astype(np.int64)
    return rows, cols, weights


def _canonical_ints(adj: np.ndarray) -> np.ndarray:
    """Canonical integer codes for a batch of ``(B, n, n)`` adjacency matrices."""
    n = adj.shape[1]
    if n == 1:
        return np.zeros(adj.shape[0], dtype=np.int64)
    rows, cols, weights = _code_tables(n)
    bits = adj[:, rows, cols]  # (B, n!, L)
    return (bits.astype(np.int64) @ weights).min(axis=1)


def _code_bytes(code: int, n: int) -> bytes:
    length = n * (n - 1) // 2
    return format(int(code), f"0{length}b").encode() if length else b""


def canonical_code(g: Graph) -> bytes:
    """Isomorphism-invariant code: the lexicographically smallest adjacency bit string."""
    if g.n > 8:
        raise BudgetExceededError("canonical codes by exhaustive relabeling need n <= 8")
    return _code_bytes(int(_canonical_ints(g.adjacency[None].astype(bool))[0]), g.n)


def _graph_from_code(code: int, n: int) -> Graph:
    bits = _code_bytes(code, n)
    iu, ju = np.triu_indices(n, 1)
    pairs = [(int(i), int(j)) for i, j, b in zip(iu, ju, bits) if b == ord("1")]
    return from_edge_list(n, pairs)


def _adjacency_from_code(code: int, n: int) -> np.ndarray:
    a = np.zeros((n, n), dtype=bool)
    bits = _code_bytes(code, n)
    iu, ju = np.triu_indices(n, 1)
    for i, j, b in zip(iu, ju, bits):
        if b == ord("1"):
            a[i, j] = a[j, i] = True
    return a


@lru_cache(maxsize=None)
def _connected_codes(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    previous = _connected_codes(n - 1)
    masks = np.array([[(s >> i) & 1 for i in range(n - 1)] for s in range(1, 1 << (n - 1))],
                     dtype=bool)
    found: set[int] = set()
    for code in previous:
        base = _adjacency_from_code(code, n - 1)
        batch = np.zeros((masks.shape[0], n, n), dtype=bool)
        batch[:, : n - 1, : n - 1] = base
        batch[:, n - 1, : n - 1] = masks
        batch[:, : n - 1, n - 1] = masks
        for s in range(0, batch.shape[0], 64):
            found.update(int(c) for c in _canonical_ints(batch[s:s + 64]))
    return tuple(sorted(found))


def enumerate_connected(n: int) -> Iterator[Graph]:
    """Every connected simple graph on ``n`` vertices, once up to isomorphism.

    Graphs come out in increasing order of canonical code, labeled by that
    code (the canonical relabeling).
    """
    if int(n) != n or n < 2:
        raise InvalidParameterError("n must be an integer >= 2")
    if n > MAX_ENUMERATION_N:
        raise BudgetExceededError(f"enumeration is limited to n <= {MAX_ENUMERATION_N}")
    for code in _connected_codes(int(n)):
        yield _graph_from_code(code, int(n))


# -- disjoint paths by unit-capacity max flow --------------------------------------

def _max_flow(cap: dict[int, dict[int, int]], source: int, sink: int, limit: int) -> int:
    """Edmonds-Karp on a residual dict; stops early once ``limit`` units flow."""
    flow = 0
    while flow < limit:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v, c in cap[u].items():
                if c > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        v = sink
        while parent[v] is not None:
            u = parent[v]
            cap[u][v] -= 1
            cap[v].setdefault(u, 0)
            cap[v][u] += 1
            v = u
        flow += 1
    return flow


def disjoint_paths(g: Graph, s: int, t: int, mode: str = "vertex", limit: int | None = None) -> int:
    """Maximum number of ``s``-``t`` paths, internally vertex- or edge-disjoint.

    Vertex-disjoint paths use the standard vertex split: ``v`` becomes
    ``v_in -> v_out`` with capacity 1 (unbounded at ``s`` and ``t``).
    """
    if s == t:
        raise InvalidParameterError("endpoints must differ")
    big = g.n + 1
    limit = big if limit is None else limit
    cap: dict[int, dict[int, int]] = {}
    if mode == "vertex":
        for v in range(g.n):
            cap.setdefault(2 * v, {})[2 * v + 1] = big if v in (s, t) else 1
            cap.setdefault(2 * v + 1, {})
        for u, v in g.edges:
            cap[2 * u + 1][2 * v] = 1
            cap[2 * v + 1][2 * u] = 1
        return _max_flow(cap, 2 * s + 1, 2 * t, limit)
    if mode == "edge":
        for v in range(g.n):
            cap.setdefault(v, {})
        for u, v in g.edges:
            cap[u][v] = 1
            cap[v][u] = 1
        return _max_flow(cap, s, t, limit)
    raise InvalidParameterError(f"mode must be 'vertex' or 'edge', got {mode!r}")


def check_prop43(g: Graph, mode: str = "vertex") -> int | None:
    """Degree ``k`` of the chosen diameter vertex if the delta lower bound applies.

    The vertex ``a`` is the minimum-degree vertex among those realizing the
    diameter. The hypothesis holds when some ``x`` has ``a`` as a farthest
    vertex and there are at least ``k = deg(a)`` disjoint ``a``-``x`` paths.
    """
    a = min_degree_vertex(g, geometry(g).omega)
    k = int(g.degrees[a])
    for x in range(g.n):
        if x == a or g.dist[x, a] < g.eccentricities[x]:
            continue
        if disjoint_paths(g, a, x, mode=mode, limit=k) >= k:
            return k
    return None


# -- scan ---------------------------------------------------------------------------

@dataclass
class AtlasRecord:
    graph: Graph
    canonical_code: bytes
    norm_estimate: SearchResult | None = None
    variation_estimate: SearchResult | None = None
    prop43_k: int | None = None
    delta_floor: float | None = None
    certified: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [list(e) for e in self.graph.edges],
            "canonical_code": self.canonical_code.decode(),
            "prop43_k": self.prop43_k,
            "delta_floor": self.delta_floor,
            "certified": self.certified,
            "norm_estimate": None if self.norm_estimate is None else self.norm_estimate.to_dict(),
            "variation_estimate": None if self.variation_estimate is None
            else self.variation_estimate.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AtlasRecord":
        g = from_edge_list(data["n"], [tuple(e) for e in data["edges"]])
        return cls(
            graph=g,
            canonical_code=data["canonical_code"].encode(),
            norm_estimate=None if data.get("norm_estimate") is None
            else SearchResult.from_dict(data["norm_estimate"]),
            variation_estimate=None if data.get("variation_estimate") is None
            else SearchResult.from_dict(data["variation_estimate"]),
            prop43_k=data.get("prop43_k"),
            delta_floor=data.get("delta_floor"),
            certified=bool(data.get("certified", False)),
        )


@dataclass
class ScanSummary:
    n: int
    p: float
    records: list[AtlasRecord]
    c_hat: float
    C_hat: float
    argmin_code: bytes
    argmax_code: bytes
    certified: bool

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in self.records)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "c_hat", "C_hat", "argmin_code", "argmax_code", "certified"])
        w.writerow([self.n, self.p, repr(self.c_hat), repr(self.C_hat),
                    self.argmin_code.decode(), self.argmax_code.decode(), self.certified])
        return buf.getvalue()


def _scan_one(args) -> AtlasRecord:
    g, p, cfg = args
    code = canonical_code(g)
    est = ascent_variation(g, p, cfg)
    certified = False
    if g.n <= GRID_ORACLE_MAX_N:
        grid = grid_oracle_variation(g, p, cfg.grid_step)
        certified = True
        if grid.best_value > est.best_value:
            est = grid
    floor, _ = max_delta_variation_ratio(g, p)
    return AtlasRecord(g, code, None, est, check_prop43(g), floor, certified)


def scan_variation_constants(n: int, p: float, cfg: SearchConfig | None = None,
                             jobs: int = 1) -> ScanSummary:
    """Estimate ``C_{G,p}`` for every ``G`` in the atlas of order ``n``.

    Each estimate is the best of coordinate ascent and (for ``n <= 4``) the
    grid oracle; both are lower bounds for ``C_{G,p}``. The minimum and
    maximum over graphs estimate ``c_{n,p}`` and ``C_{n,p}``.
    """
    if not 2 <= n <= MAX_SCAN_N:
        raise BudgetExceededError(f"scans are limited to 2 <= n <= {MAX_SCAN_N}")
    if not p > 0:
        raise InvalidParameterError("p must be positive")
    cfg = cfg or SearchConfig()
    work = [(g, float(p), cfg) for g in enumerate_connected(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_scan_one, work))
    else:
        records = [_scan_one(w) for w in work]
    records.sort(key=lambda r: r.canonical_code)
    values = [r.variation_estimate.best_value for r in records]
    lo, hi = int(np.argmin(values)), int(np.argmax(values))
    return ScanSummary(n, float(p), records, values[lo], values[hi], records[lo].canonical_code,
                       records[hi].canonical_code, all(r.certified for r in records))

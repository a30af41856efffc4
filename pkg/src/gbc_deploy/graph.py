"""Undirected graphs, edge-list parsing and all-pairs shortest-path counting.

Distances are hop counts stored as ``int64`` with :data:`UNREACHABLE` marking
disconnected pairs. Path counts are ``float64``: they can grow exponentially,
every downstream consumer only needs ratios, and counts stay exact up to 2**53.
"""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np
import scipy.sparse as sp

__all__ = [
    "UNREACHABLE",
    "Graph",
    "GraphFormatError",
    "ShortestPathData",
    "parse_edge_list",
    "read_edge_list",
    "relabel_edges",
    "bfs_single_source",
    "all_pairs",
]

UNREACHABLE = -1


class GraphFormatError(ValueError):
    """Raised when an edge list cannot be turned into a simple graph.

    ``code`` is one of ``PARSE_ERROR``, ``REJECT_SELF_LOOP`` or
    ``REJECT_DUPLICATE``; ``line`` is the 1-based offending line.
    """

    def __init__(self, code: str, line: int, message: str):
        super().__init__(f"line {line}: {code}: {message}")
        self.code = code
        self.line = line


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on nodes ``0..node_count-1``."""

    node_count: int
    edges: frozenset
    adjacency: tuple = field(repr=False)

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph, rejecting self-loops, duplicates and out-of-range ids."""
        if node_count < 1:
            raise ValueError("a graph needs at least one node")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise ValueError(f"edge ({u}, {v}) outside 0..{node_count - 1}")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError(f"duplicate edge {key}")
            canon.add(key)
        nbrs: list[list[int]] = [[] for _ in range(node_count)]
        for u, v in canon:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adjacency = tuple(tuple(sorted(a)) for a in nbrs)
        return cls(node_count, frozenset(canon), adjacency)

    @property
    def n(self) -> int:
        return self.node_count

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency_matrix(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency as a float CSR matrix."""
        n = self.node_count
        if not self.edges:
            return sp.csr_matrix((n, n), dtype=np.float64)
        e = np.array(self.sorted_edges(), dtype=np.int64)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(len(rows), dtype=np.float64)
        return sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    def without(self, nodes: Iterable[int]) -> "Graph":
        """Same node set with every edge touching ``nodes`` removed."""
        drop = set(nodes)
        kept = [e for e in self.edges if e[0] not in drop and e[1] not in drop]
        return Graph.from_edges(self.node_count, kept)

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.sorted_edges())


def parse_edge_list(text: str | TextIO, node_count: int | None = None) -> Graph:
    """Parse a whitespace-separated edge list.

    Blank lines and lines starting with ``#`` are skipped. The node count is
    ``max id + 1`` unless ``node_count`` is given (useful for isolated nodes).

    Raises
    ------
    GraphFormatError
        On malformed lines, self-loops, or repeated edges.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    seen: set[tuple[int, int]] = set()
    edges = []
    hi = -1
    for lineno, raw in enumerate(text, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError("PARSE_ERROR", lineno, f"expected two node ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("PARSE_ERROR", lineno, f"non-integer token in {line!r}") from None
        if u < 0 or v < 0:
            raise GraphFormatError("PARSE_ERROR", lineno, "node ids must be non-negative")
        if u == v:
            raise GraphFormatError("REJECT_SELF_LOOP", lineno, f"self-loop on node {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise GraphFormatError("REJECT_DUPLICATE", lineno, f"duplicate edge {key}")
        seen.add(key)
        edges.append(key)
        hi = max(hi, u, v)
    n = hi + 1 if node_count is None else node_count
    if n < 1:
        raise GraphFormatError("PARSE_ERROR", 0, "edge list contains no edges")
    if hi >= n:
        raise GraphFormatError("PARSE_ERROR", 0, f"node id {hi} exceeds node_count {n}")
    return Graph.from_edges(n, edges)


def read_edge_list(path, node_count: int | None = None) -> Graph:
    # newline=None accepts LF and CRLF
    with open(path, encoding="utf-8", newline=None) as fh:
        return parse_edge_list(fh, node_count=node_count)


def relabel_edges(pairs: Iterable[tuple]) -> tuple[list[tuple[int, int]], dict]:
    """Map arbitrary hashable node labels onto dense ids in first-seen order.

    Returns the relabelled edge list and the ``label -> id`` mapping.
    """
    mapping: dict = {}
    out = []
    for u, v in pairs:
        for x in (u, v):
            if x not in mapping:
                mapping[x] = len(mapping)
        out.append((mapping[u], mapping[v]))
    return out, mapping


@dataclass(frozen=True)
class ShortestPathData:
    """All-pairs hop distances and shortest-path counts.

    ``dist[s, t]`` is :data:`UNREACHABLE` exactly when ``sigma[s, t] == 0``.
    The diagonal follows the convention ``dist = 0``, ``sigma = 1``.
    """

    dist: np.ndarray
    sigma: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def reachable(self) -> np.ndarray:
        return self.dist != UNREACHABLE

    @property
    def ordered_pairs(self) -> int:
        return self.n * (self.n - 1)


def bfs_single_source(g: Graph, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Breadth-first distances and path counts from ``s`` (Brandes' forward pass)."""
    if not 0 <= s < g.n:
        raise IndexError(f"source {s} out of range")
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    sigma = np.zeros(g.n, dtype=np.float64)
    dist[s] = 0
    sigma[s] = 1.0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                queue.append(w)
            if dist[w] == dist[u] + 1:
                sigma[w] += sigma[u]
    return dist, sigma


def all_pairs(g: Graph) -> ShortestPathData:
    """Distances and path counts for every source at once.

    Runs the BFS level by level for all sources simultaneously: the counts of
    level ``k + 1`` are the counts of level ``k`` pushed through the sparse
    adjacency matrix, restricted to nodes not yet reached. Each row equals
    :func:`bfs_single_source` for that source.
    """
    n = g.n
    adj = g.adjacency_matrix()
    dist = np.full((n, n), UNREACHABLE, dtype=np.int64)
    sigma = np.zeros((n, n), dtype=np.float64)
    np.fill_diagonal(dist, 0)
    np.fill_diagonal(sigma, 1.0)
    frontier = np.eye(n, dtype=np.float64)
    level = 0
    while True:
        # (frontier @ adj)[s, w] = sum of sigma[s, u] over neighbours u of w at this level
        pushed = np.asarray((adj @ frontier.T).T)
        new = (pushed > 0) & (dist == UNREACHABLE)
        if not new.any():
            break
        level += 1
        dist[new] = level
        sigma[new] = pushed[new]
        frontier = np.where(new, pushed, 0.0)
    return ShortestPathData(dist=dist, sigma=sigma)

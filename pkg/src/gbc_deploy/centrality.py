"""Betweenness, group betweenness and pairwise path betweenness.

All sums run over ordered pairs ``(s, t)`` with ``s != t``. A node covers
every pair it is an endpoint of (``sigma[x, x] == 1``), and disconnected
pairs contribute nothing. The natural scale of every quantity here is
``n * (n - 1)``, the number of ordered pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numba
import numpy as np
import scipy.sparse as sp

from .graph import UNREACHABLE, Graph, ShortestPathData, all_pairs

__all__ = [
    "CandidateIndex",
    "MatrixPair",
    "sigma_through",
    "betweenness",
    "group_betweenness_direct",
    "path_betweenness_pair",
    "pair_dependency",
    "path_betweenness_matrix",
    "init_matrices",
]

DEPLOYED = "DEPLOYED"
CANDIDATE = "CANDIDATE"


def _group(nodes: Iterable[int], n: int) -> list[int]:
    members = [int(v) for v in nodes]
    if len(set(members)) != len(members):
        raise ValueError("node group contains duplicates")
    for v in members:
        if not 0 <= v < n:
            raise ValueError(f"node {v} out of range 0..{n - 1}")
    return members


@dataclass(frozen=True)
class CandidateIndex:
    """The ``l = |C u D|`` nodes whose pairwise matrices are maintained.

    Nodes are laid out in ascending order whatever their role, so two
    problems over the same ``C u D`` share one matrix layout.
    """

    nodes: tuple
    deployed: frozenset
    candidates: frozenset

    @classmethod
    def build(cls, deployed: Iterable[int], candidates: Iterable[int], n: int) -> "CandidateIndex":
        d = _group(sorted(set(deployed)), n)
        c = _group(sorted(set(candidates)), n)
        overlap = set(d) & set(c)
        if overlap:
            raise ValueError(f"deployed and candidate sets overlap: {sorted(overlap)}")
        return cls(tuple(sorted(d + c)), frozenset(d), frozenset(c))

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def position(self) -> dict:
        return {v: i for i, v in enumerate(self.nodes)}

    def role(self, v: int) -> str:
        if v in self.deployed:
            return DEPLOYED
        if v in self.candidates:
            return CANDIDATE
        raise KeyError(v)


@dataclass
class MatrixPair:
    """Path counts and ordered path betweenness restricted to ``C u D``.

    ``pb_m[i, j]`` counts (fractionally) shortest paths that visit
    ``nodes[i]`` before ``nodes[j]``; the diagonal is plain betweenness.
    """

    sigma_m: np.ndarray
    pb_m: np.ndarray

    def copy(self) -> "MatrixPair":
        return MatrixPair(self.sigma_m.copy(), self.pb_m.copy())


def sigma_through(spd: ShortestPathData, s: int, t: int, v: int) -> float:
    """Number of shortest ``s``-``t`` paths that visit ``v``."""
    d = spd.dist
    if d[s, v] == UNREACHABLE or d[v, t] == UNREACHABLE or d[s, t] == UNREACHABLE:
        return 0.0
    if d[s, v] + d[v, t] != d[s, t]:
        return 0.0
    return float(spd.sigma[s, v] * spd.sigma[v, t])


def _through_mask(spd: ShortestPathData, v: int) -> np.ndarray:
    d = spd.dist
    reach = spd.reachable
    mask = reach & reach[:, [v]] & reach[[v], :]
    mask &= d[:, [v]] + d[[v], :] == d
    np.fill_diagonal(mask, False)
    return mask


def betweenness(spd: ShortestPathData, v: int) -> float:
    """Betweenness of ``v`` including the pairs it is an endpoint of."""
    mask = _through_mask(spd, v)
    through = np.outer(spd.sigma[:, v], spd.sigma[v, :])
    return float(np.sum(through[mask] / spd.sigma[mask]))


def group_betweenness_direct(g: Graph, spd: ShortestPathData, group: Iterable[int]) -> float:
    """Group betweenness by counting the shortest paths that avoid the group.

    A shortest ``s``-``t`` path misses every member of ``group`` exactly when
    it survives in ``G - group`` with unchanged length, so the covered count is
    ``sigma[s, t]`` minus the number of such surviving paths.
    """
    members = _group(group, g.n)
    reach = spd.reachable.copy()
    np.fill_diagonal(reach, False)
    if not members:
        return 0.0
    rest = all_pairs(g.without(members))
    surviving = np.where(rest.dist == spd.dist, rest.sigma, 0.0)
    surviving[members, :] = 0.0
    surviving[:, members] = 0.0
    covered = (spd.sigma - surviving)[reach] / spd.sigma[reach]
    return float(np.sum(covered))


def path_betweenness_pair(spd: ShortestPathData, x: int, y: int) -> float:
    """Ordered path betweenness of ``(x, y)`` straight from the definition.

    Sums ``sigma[s,x] sigma[x,y] sigma[y,t] / sigma[s,t]`` over ordered pairs
    whose shortest paths can pass ``x`` and then ``y``. Costs ``O(n^2)``.
    """
    d = spd.dist
    if d[x, y] == UNREACHABLE:
        return 0.0
    reach = spd.reachable
    mask = reach & reach[:, [x]] & reach[[y], :]
    mask &= d[:, [x]] + d[x, y] + d[[y], :] == d
    np.fill_diagonal(mask, False)
    num = np.outer(spd.sigma[:, x], spd.sigma[y, :]) * spd.sigma[x, y]
    return float(np.sum(num[mask] / spd.sigma[mask]))


def pair_dependency(spd: ShortestPathData) -> np.ndarray:
    """``dep[s, y]``: fraction of shortest paths from ``s`` that visit ``y``.

    Summed over all targets ``t != s`` and counting ``t == y``. This is
    Brandes' dependency accumulation run backwards for every source at once,
    one BFS level at a time. Column sums give betweenness.
    """
    d = spd.dist
    n = spd.n
    adj = sp.csr_matrix((d == 1).astype(np.float64))
    delta = np.zeros((n, n), dtype=np.float64)
    reach = spd.reachable
    safe_sigma = np.where(reach, spd.sigma, 1.0)
    top = int(d.max()) if n else 0
    for level in range(top - 1, -1, -1):
        child = d == level + 1
        z = np.where(child, (1.0 + delta) / safe_sigma, 0.0)
        pulled = np.asarray((adj @ z.T).T)
        here = d == level
        delta[here] = spd.sigma[here] * pulled[here]
    dep = delta + reach
    np.fill_diagonal(dep, np.diag(delta))
    return dep


@numba.njit(cache=True)
def _pb_kernel(dist_rows, sigma_rows, weight_rows, dxy, sxy):
    l, n = dist_rows.shape
    out = np.zeros((l, l))
    for i in range(l):
        di = dist_rows[i]
        si = sigma_rows[i]
        for j in range(l):
            k = dxy[i, j]
            if k < 0:
                continue
            dj = dist_rows[j]
            wj = weight_rows[j]
            acc = 0.0
            for s in range(n):
                a = di[s]
                if a >= 0 and a + k == dj[s]:
                    acc += si[s] * wj[s]
            out[i, j] = sxy[i, j] * acc
    return out


def path_betweenness_matrix(
    spd: ShortestPathData, nodes: Sequence[int], method: str = "fast"
) -> np.ndarray:
    """Ordered path betweenness for every pair drawn from ``nodes``.

    ``method="definitional"`` evaluates :func:`path_betweenness_pair` per cell
    (``O(l^2 n^2)``). ``method="fast"`` splits each path at ``y``:

        PB(x, y) = sum_s [x on a shortest s-y path] * sigma[s,x] sigma[x,y] / sigma[s,y] * dep[s, y]

    which is ``O(l^2 n)`` after one :func:`pair_dependency` pass.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    if method == "definitional":
        return np.array(
            [[path_betweenness_pair(spd, int(x), int(y)) for y in nodes] for x in nodes],
            dtype=np.float64,
        ).reshape(len(nodes), len(nodes))
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    reach = spd.reachable
    dep = pair_dependency(spd)
    # weight[y, s] = dep[s, y] / sigma[s, y]; dist and sigma are symmetric
    weight = np.where(reach, dep / np.where(reach, spd.sigma, 1.0), 0.0).T
    dist_rows = np.ascontiguousarray(spd.dist[nodes])
    sigma_rows = np.ascontiguousarray(spd.sigma[nodes])
    weight_rows = np.ascontiguousarray(weight[nodes])
    dxy = np.ascontiguousarray(dist_rows[:, nodes])
    sxy = np.ascontiguousarray(sigma_rows[:, nodes])
    return _pb_kernel(dist_rows, sigma_rows, weight_rows, dxy, sxy)


def init_matrices(spd: ShortestPathData, idx: CandidateIndex, method: str = "fast") -> MatrixPair:
    """Starting ``sigma^M`` and ``PB^M`` for ``M`` empty."""
    nodes = list(idx.nodes)
    sigma_m = spd.sigma[np.ix_(nodes, nodes)].copy()
    pb_m = path_betweenness_matrix(spd, nodes, method=method)
    return MatrixPair(sigma_m=sigma_m, pb_m=pb_m)

"""Brute-force references for small graphs.

Nothing here shares a code path with the incremental machinery: paths are
enumerated explicitly, and the exhaustive optimum recounts group
betweenness from scratch for every subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .centrality import group_betweenness_direct
from .graph import Graph, ShortestPathData, all_pairs
from .placement import DeploymentProblem, two_phase_place

__all__ = [
    "PathExplosionError",
    "SearchTooLargeError",
    "BoundViolationError",
    "OptResult",
    "enumerate_shortest_paths",
    "all_shortest_paths",
    "gbc_enumeration_oracle",
    "pb_enumeration_oracle",
    "optimal_k_subset",
    "greedy_bound",
    "approx_ratio_check",
]

MAX_PATHS = 10**6
MAX_SUBSETS = 10**6


class PathExplosionError(RuntimeError):
    code = "PATH_EXPLOSION"


class SearchTooLargeError(RuntimeError):
    code = "SEARCH_TOO_LARGE"


class BoundViolationError(AssertionError):
    """Greedy fell below ``1 - (1 - 1/k)^k`` of the exhaustive optimum."""


def _bfs_dist(g: Graph, t: int) -> list:
    dist = [-1] * g.n
    dist[t] = 0
    frontier = [t]
    while frontier:
        nxt = []
        for u in frontier:
            for w in g.adjacency[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def enumerate_shortest_paths(g: Graph, s: int, t: int, limit: int = MAX_PATHS) -> list:
    """Every shortest ``s``-``t`` path as an explicit node list.

    Depth-first walk that only steps to neighbours one hop closer to ``t``.
    """
    if s == t:
        raise ValueError("s and t must differ")
    to_t = _bfs_dist(g, t)
    if to_t[s] < 0:
        return []
    out = []
    stack = [(s, [s])]
    while stack:
        u, path = stack.pop()
        if u == t:
            out.append(path)
            if len(out) > limit:
                raise PathExplosionError(f"more than {limit} shortest paths between {s} and {t}")
            continue
        for w in reversed(g.adjacency[u]):
            if to_t[w] == to_t[u] - 1:
                stack.append((w, path + [w]))
    return out


def all_shortest_paths(g: Graph, limit: int = MAX_PATHS) -> dict:
    """``{(s, t): paths}`` for every ordered pair ``s != t``."""
    return {
        (s, t): enumerate_shortest_paths(g, s, t, limit)
        for s in range(g.n)
        for t in range(g.n)
        if s != t
    }


def gbc_enumeration_oracle(g: Graph, group: Iterable[int], paths: dict | None = None) -> float:
    """Share of shortest paths touching ``group``, summed over ordered pairs."""
    members = set(group)
    if paths is None:
        paths = all_shortest_paths(g)
    total = 0.0
    for ps in paths.values():
        if ps:
            hit = sum(1 for p in ps if not members.isdisjoint(p))
            total += hit / len(ps)
    return total


def pb_enumeration_oracle(
    g: Graph, x: int, y: int, excluded: Iterable[int] = (), paths: dict | None = None
) -> float:
    """Ordered path betweenness of ``(x, y)`` over paths that avoid ``excluded``.

    For ``x == y`` this is betweenness of ``x`` restricted to those paths.
    """
    banned = set(excluded)
    if paths is None:
        paths = all_shortest_paths(g)
    total = 0.0
    for ps in paths.values():
        if not ps:
            continue
        hit = 0
        for p in ps:
            if not banned.isdisjoint(p):
                continue
            if x == y:
                hit += x in p
            elif x in p and y in p and p.index(x) < p.index(y):
                hit += 1
        total += hit / len(ps)
    return total


@dataclass
class OptResult:
    best_set: tuple
    best_value: float
    evaluated: int


def optimal_k_subset(
    problem: DeploymentProblem, spd: ShortestPathData | None = None, max_subsets: int = MAX_SUBSETS
) -> OptResult:
    """Exhaustive best ``k``-subset of the candidates, by gain over ``GBC(D)``.

    Ties go to the lexicographically smallest sorted subset.
    """
    k = problem.budget
    if k is None:
        raise ValueError("optimal_k_subset needs a budget")
    cands = sorted(problem.candidates)
    count = math.comb(len(cands), k)
    if count > max_subsets:
        raise SearchTooLargeError(f"C({len(cands)}, {k}) = {count} subsets exceeds {max_subsets}")
    g = problem.graph
    if spd is None:
        spd = all_pairs(g)
    base_set = sorted(problem.deployed)
    base = group_betweenness_direct(g, spd, base_set)
    best, best_value, evaluated = (), -math.inf, 0
    for subset in combinations(cands, k):
        value = group_betweenness_direct(g, spd, base_set + list(subset)) - base
        evaluated += 1
        # strict: combinations() yields in lexicographic order
        if value > best_value:
            best, best_value = subset, value
    if k == 0:
        best_value = 0.0
    return OptResult(best_set=tuple(best), best_value=best_value, evaluated=evaluated)


def greedy_bound(k: int) -> float:
    return 1.0 if k == 0 else 1.0 - (1.0 - 1.0 / k) ** k


@dataclass
class RatioReport:
    greedy_value: float
    opt_value: float
    ratio: float
    bound: float
    picks: list
    best_set: tuple

    @property
    def passed(self) -> bool:
        return self.ratio >= self.bound - 1e-9

    def __iter__(self):
        return iter((self.greedy_value, self.opt_value, self.ratio))


def approx_ratio_check(
    problem: DeploymentProblem,
    spd: ShortestPathData | None = None,
    raise_on_violation: bool = True,
    max_subsets: int = MAX_SUBSETS,
) -> RatioReport:
    """Compare greedy placement with the exhaustive optimum.

    The greedy value is recomputed from scratch for the returned picks, so a
    broken update cannot vouch for itself.

    Raises
    ------
    BoundViolationError
        If ``greedy / opt < 1 - (1 - 1/k)^k`` and ``raise_on_violation``.
    """
    g = problem.graph
    if spd is None:
        spd = all_pairs(g)
    opt = optimal_k_subset(problem, spd, max_subsets=max_subsets)
    result = two_phase_place(problem, spd)
    base = sorted(problem.deployed)
    greedy_value = group_betweenness_direct(g, spd, base + list(result.picks)) - group_betweenness_direct(
        g, spd, base
    )
    scale = max(1, g.n * (g.n - 1))
    if opt.best_value <= 1e-12 * scale:
        ratio = 1.0
    else:
        ratio = greedy_value / opt.best_value
    report = RatioReport(
        greedy_value=greedy_value,
        opt_value=opt.best_value,
        ratio=ratio,
        bound=greedy_bound(problem.budget),
        picks=list(result.picks),
        best_set=opt.best_set,
    )
    if raise_on_violation and not report.passed:
        raise BoundViolationError(
            f"greedy/opt = {ratio:.6f} < {report.bound:.6f} (picks {report.picks}, opt {opt.best_set})"
        )
    return report

"""Incremental monitor placement by greedy group-betweenness maximisation.

The state keeps, for every pair of nodes in ``C u D``, the number of
shortest paths that avoid the excluded set ``M`` and the ordered path
betweenness of that pair restricted to those paths. Excluding one more
node is an ``O(l^2)`` matrix update, and the diagonal of the path
betweenness matrix is exactly each node's marginal gain.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .centrality import CandidateIndex, MatrixPair, init_matrices
from .graph import UNREACHABLE, Graph, ShortestPathData, all_pairs

__all__ = [
    "PlacementError",
    "InternalConsistencyError",
    "DeploymentProblem",
    "PlacementState",
    "PlacementResult",
    "initial_state",
    "update",
    "contribution_of",
    "two_phase_place",
    "place_to_coverage",
]

# relative to n(n-1); drift below this is clamped to zero
DRIFT_TOL = 1e-9
# relative to n(n-1); gains this close count as tied
TIE_TOL = 1e-12


class PlacementError(ValueError):
    """Invalid placement request. ``code`` names the violated precondition."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class InternalConsistencyError(RuntimeError):
    pass


@dataclass
class DeploymentProblem:
    graph: Graph
    deployed: frozenset
    candidates: frozenset
    budget: int | None = None
    coverage_target: float | None = None

    def __post_init__(self):
        n = self.graph.n
        self.deployed = frozenset(int(v) for v in self.deployed)
        self.candidates = frozenset(int(v) for v in self.candidates)
        for v in self.deployed | self.candidates:
            if not 0 <= v < n:
                raise PlacementError("NODE_OUT_OF_RANGE", f"node {v} not in 0..{n - 1}")
        overlap = self.deployed & self.candidates
        if overlap:
            raise PlacementError("OVERLAP", f"deployed and candidate sets share {sorted(overlap)}")
        if (self.budget is None) == (self.coverage_target is None):
            raise PlacementError("BAD_PROBLEM", "set exactly one of budget and coverage_target")
        if self.budget is not None:
            if self.budget < 0:
                raise PlacementError("BAD_PROBLEM", "budget must be non-negative")
            if self.budget > len(self.candidates):
                raise PlacementError(
                    "BUDGET_EXCEEDS_CANDIDATES",
                    f"k={self.budget} but only {len(self.candidates)} candidates",
                )
        if self.coverage_target is not None and not 0.0 <= self.coverage_target <= 1.0:
            raise PlacementError("BAD_PROBLEM", "coverage_target must lie in [0, 1]")

    @classmethod
    def all_candidates(cls, graph: Graph, deployed: Iterable[int] = (), **kw) -> "DeploymentProblem":
        d = frozenset(deployed)
        return cls(graph, d, frozenset(range(graph.n)) - d, **kw)


@dataclass
class PlacementState:
    """Mutable bookkeeping for the growing excluded set ``M``."""

    idx: CandidateIndex
    dist: np.ndarray
    matrices: MatrixPair
    n: int
    members: list = field(default_factory=list)
    gbc_m: float = 0.0

    @property
    def scale(self) -> float:
        return float(self.n * (self.n - 1))

    def copy(self) -> "PlacementState":
        return PlacementState(
            self.idx, self.dist, self.matrices.copy(), self.n, list(self.members), self.gbc_m
        )


@dataclass
class PlacementResult:
    picks: list
    marginal: list
    gbc_initial: float
    gbc_final: float
    coverage_initial: float
    coverage_final: float
    target_met: bool | None = None
    # wall-clock seconds per stage; not part of the result's identity
    timings: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def monitors(self) -> int:
        return len(self.picks)


def initial_state(
    spd: ShortestPathData,
    idx: CandidateIndex,
    method: str = "fast",
    matrices: MatrixPair | None = None,
) -> PlacementState:
    """State with ``M`` empty. ``matrices`` reuses a prior :func:`init_matrices` result."""
    nodes = list(idx.nodes)
    if matrices is None:
        matrices = init_matrices(spd, idx, method=method)
    return PlacementState(
        idx=idx,
        dist=spd.dist[np.ix_(nodes, nodes)].copy(),
        matrices=matrices.copy(),
        n=spd.n,
    )


def _clamp(a: np.ndarray, tol: float, what: str) -> np.ndarray:
    low = a.min() if a.size else 0.0
    if low < -tol:
        raise InternalConsistencyError(f"{what} went negative ({low:g} < -{tol:g})")
    return np.maximum(a, 0.0, out=a)


def _ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    # 0/0 -> 0: no surviving x-y path means no surviving path through x and y
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0)
    return out


def update(state: PlacementState, v: int) -> PlacementState:
    """Exclude ``v``: drop every shortest path through it from both matrices.

    Returns a new state; ``state`` is left untouched. Every cell is computed
    from the pre-update snapshot. For distinct ``x, y, v`` at most one of the
    three visiting orders can lie on a shortest path, and original distances
    decide which.
    """
    pos = state.idx.position
    if v not in pos:
        raise PlacementError("V_NOT_IN_INDEX", f"node {v} is not in C u D")
    if v in state.members:
        raise PlacementError("V_ALREADY_EXCLUDED", f"node {v} already excluded")
    p = pos[v]
    d = state.dist
    sm = state.matrices.sigma_m
    pb = state.matrices.pb_m

    reach = d != UNREACHABLE
    dv = d[:, p]  # d(x, v) == d(v, x)
    rv = reach[:, p]
    both = reach & rv[:, None] & rv[None, :]
    # x ... v ... y
    v_mid = both & (dv[:, None] + dv[None, :] == d)
    # x ... y ... v
    y_mid = both & (d + dv[None, :] == dv[:, None])
    # v ... x ... y
    x_mid = both & (dv[:, None] + d == dv[None, :])

    through_v = np.where(v_mid, np.outer(sm[:, p], sm[p, :]), 0.0)
    new_sm = sm - through_v

    l = len(state.idx)
    off = ~np.eye(l, dtype=bool)
    off[p, :] = False
    off[:, p] = False
    assert not np.any(off & ((v_mid & y_mid) | (v_mid & x_mid) | (y_mid & x_mid)))

    new_pb = pb.copy()
    # v between x and y: the share of PB(x, y) that also visits v
    sel = off & v_mid
    new_pb[sel] -= (_ratio(through_v, sm) * pb)[sel]
    # y between x and v: the share of PB(x, v) that also visits y
    sel = off & y_mid
    frac = _ratio(sm * sm[None, :, p], sm[:, [p]])
    new_pb[sel] -= (frac * pb[:, [p]])[sel]
    # x between v and y: the share of PB(v, y) that also visits x
    sel = off & x_mid
    frac = _ratio(sm[p, :, None] * sm, sm[[p], :])
    new_pb[sel] -= (frac * pb[[p], :])[sel]

    diag = np.arange(l)
    new_pb[diag, diag] = pb[diag, diag] - pb[p, :] - pb[:, p]
    new_pb[p, :] = 0.0
    new_pb[:, p] = 0.0

    tol = DRIFT_TOL * state.scale
    _clamp(new_pb, tol, "path betweenness")
    _clamp(new_sm, tol, "path count")

    return PlacementState(
        idx=state.idx,
        dist=d,
        matrices=MatrixPair(new_sm, new_pb),
        n=state.n,
        members=state.members + [v],
        gbc_m=state.gbc_m + float(pb[p, p]),
    )


def contribution_of(state: PlacementState, v: int) -> float:
    """Gain in group betweenness from adding ``v`` to the current ``M``."""
    pos = state.idx.position
    if v not in pos:
        raise PlacementError("V_NOT_IN_INDEX", f"node {v} is not in C u D")
    p = pos[v]
    return float(state.matrices.pb_m[p, p])


def _coverage(gbc: float, n: int) -> float:
    pairs = n * (n - 1)
    if pairs == 0:
        return 1.0
    return min(1.0, max(0.0, gbc / pairs))


def _best_candidate(state: PlacementState, remaining: np.ndarray) -> int:
    """Position of the remaining candidate with the largest gain.

    Candidates are laid out in ascending node order, so the first gain within
    rounding noise of the maximum is the lowest-index tied node.
    """
    gains = np.diag(state.matrices.pb_m)[remaining]
    top = gains.max()
    first = np.flatnonzero(gains >= top - TIE_TOL * state.scale)[0]
    return int(remaining[first])


def _greedy(problem, spd, method, matrices, stop):
    clock = time.perf_counter
    timings = {}
    t0 = clock()
    if spd is None:
        spd = all_pairs(problem.graph)
    t1 = clock()
    idx = CandidateIndex.build(problem.deployed, problem.candidates, problem.graph.n)
    state = initial_state(spd, idx, method=method, matrices=matrices)
    t2 = clock()
    for v in sorted(problem.deployed):
        state = update(state, v)
    t3 = clock()
    timings.update(shortest_paths=t1 - t0, init=t2 - t1, phase1=t3 - t2)
    gbc_initial = state.gbc_m
    n = problem.graph.n
    remaining = np.array(
        [i for i, v in enumerate(state.idx.nodes) if v in problem.candidates], dtype=np.int64
    )
    picks, marginal = [], []
    while not stop(state, len(picks)) and remaining.size:
        p = _best_candidate(state, remaining)
        v = state.idx.nodes[p]
        marginal.append(contribution_of(state, v))
        state = update(state, v)
        picks.append(v)
        remaining = remaining[remaining != p]
    timings["phase2"] = clock() - t3
    return state, PlacementResult(
        picks=picks,
        marginal=marginal,
        gbc_initial=gbc_initial,
        gbc_final=state.gbc_m,
        coverage_initial=_coverage(gbc_initial, n),
        coverage_final=_coverage(state.gbc_m, n),
        timings=timings,
    )


def two_phase_place(
    problem: DeploymentProblem,
    spd: ShortestPathData | None = None,
    method: str = "fast",
    matrices: MatrixPair | None = None,
) -> PlacementResult:
    """Choose ``problem.budget`` extra monitors on top of ``problem.deployed``.

    Phase one excludes the deployed nodes (ascending order); phase two
    repeatedly takes the candidate with the largest marginal gain.

    Parameters
    ----------
    problem : DeploymentProblem
        Must use the budget form.
    spd : ShortestPathData, optional
        Precomputed shortest-path data for ``problem.graph``.
    method : {"fast", "definitional"}
        How the initial path betweenness matrix is built.
    matrices : MatrixPair, optional
        Initial matrices over ``sorted(C u D)``, reused instead of rebuilt.
    """
    if problem.budget is None:
        raise PlacementError("BAD_PROBLEM", "two_phase_place needs a budget")
    k = problem.budget
    _, result = _greedy(problem, spd, method, matrices, lambda state, picked: picked >= k)
    return result


def place_to_coverage(
    problem: DeploymentProblem,
    spd: ShortestPathData | None = None,
    method: str = "fast",
    matrices: MatrixPair | None = None,
) -> PlacementResult:
    """Add monitors greedily until ``coverage_target`` of all ordered pairs is covered.

    Stops early if the candidates run out; ``target_met`` records the outcome.
    """
    if problem.coverage_target is None:
        raise PlacementError("BAD_PROBLEM", "place_to_coverage needs a coverage_target")
    n = problem.graph.n
    target = problem.coverage_target * n * (n - 1)
    slack = DRIFT_TOL * n * (n - 1)

    def reached(state, picked):
        return state.gbc_m >= target - slack

    state, result = _greedy(problem, spd, method, matrices, reached)
    result.target_met = bool(reached(state, len(result.picks)))
    return result

"""Growing Barabasi-Albert networks and the redeploy-vs-extend experiment.

At every snapshot of a growing network two strategies reach the same
coverage target: *fresh* places all monitors from scratch, *incremental*
keeps every monitor it deployed earlier and only adds new ones. The gap in
monitor counts is the price of not relocating hardware.

Random numbers come from numpy's PCG64 bit generator, seeded with the
integer pair ``(seed, m_attach)``; PCG64 output is specified bit-for-bit,
so runs reproduce across platforms.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .centrality import CandidateIndex, init_matrices
from .graph import Graph, all_pairs
from .placement import DeploymentProblem, place_to_coverage

__all__ = [
    "EvolutionConfig",
    "EvolutionRecord",
    "make_rng",
    "ba_grow",
    "run_evolution_experiment",
    "summarize",
    "penalty_trend",
    "write_records_csv",
    "write_summary_csv",
    "RECORD_HEADER",
    "SUMMARY_HEADER",
]

RECORD_HEADER = [
    "seed",
    "m_attach",
    "n",
    "monitors_fresh",
    "monitors_incremental",
    "penalty_abs",
    "penalty_rel",
]
SUMMARY_HEADER = [
    "m_attach",
    "n",
    "records",
    "mean_penalty_abs",
    "max_penalty_abs",
    "mean_penalty_rel",
    "max_penalty_rel",
]


def make_rng(seed: int, m_attach: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([int(seed), int(m_attach)]))


def ba_grow(g: Graph | None, target_n: int, m_attach: int, rng: np.random.Generator) -> Graph:
    """Grow ``g`` to ``target_n`` nodes by preferential attachment.

    An empty start (``g is None``) is the complete graph on ``m_attach + 1``
    nodes. Each new node links to ``m_attach`` distinct existing nodes drawn
    uniformly from the multiset of edge endpoints, i.e. proportionally to
    degree; repeats for the same new node are redrawn.
    """
    if m_attach < 1:
        raise ValueError("m_attach must be at least 1")
    if g is None:
        seed_n = m_attach + 1
        edges = [(u, v) for u in range(seed_n) for v in range(u + 1, seed_n)]
        n = seed_n
    else:
        edges = g.sorted_edges()
        n = g.n
        if n < m_attach:
            raise ValueError("existing graph has fewer nodes than m_attach")
    endpoints = [x for e in edges for x in e]
    if not endpoints:
        # attach uniformly until the first edge exists
        endpoints = list(range(n))
    for new in range(n, target_n):
        chosen: list[int] = []
        while len(chosen) < m_attach:
            t = endpoints[int(rng.integers(len(endpoints)))]
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            edges.append((t, new))
            endpoints.extend((t, new))
    return Graph.from_edges(max(n, target_n), edges)


@dataclass
class EvolutionConfig:
    m_attach: Sequence[int] = (1, 2, 3)
    n_start: int = 100
    n_end: int = 1000
    n_step: int = 100
    coverage_target: float = 0.95
    seeds: Sequence[int] = tuple(range(1, 11))
    threads: int = 1

    def __post_init__(self):
        self.m_attach = tuple(int(m) for m in self.m_attach)
        self.seeds = tuple(int(s) for s in self.seeds)
        if not self.m_attach or not self.seeds:
            raise ValueError("need at least one m_attach value and one seed")
        if any(m < 1 for m in self.m_attach):
            raise ValueError("m_attach values must be >= 1")
        if self.n_start < max(self.m_attach) + 1:
            raise ValueError("n_start must exceed every m_attach")
        if self.n_step < 1 or self.n_end < self.n_start:
            raise ValueError("need n_step >= 1 and n_end >= n_start")
        if not 0.0 < self.coverage_target <= 1.0:
            raise ValueError("coverage_target must lie in (0, 1]")

    def sizes(self) -> list[int]:
        return list(range(self.n_start, self.n_end + 1, self.n_step))


@dataclass
class EvolutionRecord:
    seed: int
    m_attach: int
    n: int
    monitors_fresh: int
    monitors_incremental: int
    penalty_abs: int = field(init=False)
    penalty_rel: float = field(init=False)

    def __post_init__(self):
        self.penalty_abs = self.monitors_incremental - self.monitors_fresh
        if self.monitors_fresh:
            self.penalty_rel = self.penalty_abs / self.monitors_fresh
        else:
            self.penalty_rel = 0.0 if self.penalty_abs == 0 else math.inf


def _run_series(m_attach: int, seed: int, cfg: EvolutionConfig) -> list[EvolutionRecord]:
    rng = make_rng(seed, m_attach)
    g = None
    deployed: set[int] = set()
    out = []
    for n in cfg.sizes():
        g = ba_grow(g, n, m_attach, rng)
        spd = all_pairs(g)
        everyone = range(g.n)
        # both strategies index every node, so one matrix build serves both
        matrices = init_matrices(spd, CandidateIndex.build((), everyone, g.n))
        fresh = place_to_coverage(
            DeploymentProblem.all_candidates(g, coverage_target=cfg.coverage_target),
            spd,
            matrices=matrices,
        )
        inc = place_to_coverage(
            DeploymentProblem.all_candidates(g, deployed, coverage_target=cfg.coverage_target),
            spd,
            matrices=matrices,
        )
        if not (fresh.target_met and inc.target_met):
            raise RuntimeError(f"coverage target unreachable at n={n}, seed={seed}")
        deployed |= set(inc.picks)
        out.append(EvolutionRecord(seed, m_attach, n, len(fresh.picks), len(deployed)))
    return out


def _run_series_args(args):
    return _run_series(*args)


def run_evolution_experiment(cfg: EvolutionConfig) -> list[EvolutionRecord]:
    """Run every ``(m_attach, seed)`` growth series.

    Series are independent; with ``cfg.threads > 1`` they run in worker
    processes. Records are sorted by ``(m_attach, seed, n)`` either way.
    """
    jobs = [(m, s, cfg) for m in cfg.m_attach for s in cfg.seeds]
    if cfg.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            series = list(pool.map(_run_series_args, jobs))
    else:
        series = [_run_series(*job) for job in jobs]
    records = [r for chunk in series for r in chunk]
    records.sort(key=lambda r: (r.m_attach, r.seed, r.n))
    return records


def summarize(records: Iterable[EvolutionRecord]) -> dict:
    """Mean and max penalties per ``(m_attach, n)`` cell and overall."""
    records = list(records)
    if not records:
        raise ValueError("EMPTY_INPUT: no records to summarize")

    def stats(rs):
        pa = np.array([r.penalty_abs for r in rs], dtype=float)
        pr = np.array([r.penalty_rel for r in rs], dtype=float)
        return {
            "records": len(rs),
            "mean_penalty_abs": float(pa.mean()),
            "max_penalty_abs": float(pa.max()),
            "mean_penalty_rel": float(pr.mean()),
            "max_penalty_rel": float(pr.max()),
        }

    cells = {}
    for r in records:
        cells.setdefault((r.m_attach, r.n), []).append(r)
    rows = [{"m_attach": m, "n": n, **stats(rs)} for (m, n), rs in sorted(cells.items())]
    by_n: dict[int, list] = {}
    for r in records:
        by_n.setdefault(r.n, []).append(r.penalty_abs)
    trend = {n: float(np.mean(v)) for n, v in sorted(by_n.items())}
    return {"cells": rows, "overall": stats(records), "mean_penalty_abs_by_n": trend}


def penalty_trend(summary: dict) -> float:
    """Spearman rank correlation between ``n`` and mean absolute penalty.

    Returns ``nan`` when either series is constant.
    """
    from scipy.stats import spearmanr

    trend = summary["mean_penalty_abs_by_n"]
    ns = list(trend)
    if len(ns) < 2:
        return math.nan
    vals = [trend[n] for n in ns]
    if len(set(vals)) < 2:
        return math.nan
    return float(spearmanr(ns, vals).statistic)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def write_records_csv(records: Iterable[EvolutionRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in records:
            row = asdict(r)
            w.writerow([_fmt(row[k]) for k in RECORD_HEADER])


def write_summary_csv(summary: dict, path) -> None:
    """One row per ``(m_attach, n)`` cell, then an ``all,all`` overall row."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for row in summary["cells"]:
            w.writerow([_fmt(row[k]) for k in SUMMARY_HEADER])
        overall = {"m_attach": "all", "n": "all", **summary["overall"]}
        w.writerow([_fmt(overall[k]) for k in SUMMARY_HEADER])


def read_records_csv(path) -> list[EvolutionRecord]:
    names = {f.name for f in fields(EvolutionRecord) if f.init}
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(EvolutionRecord(**{k: int(row[k]) for k in names}))
    return out

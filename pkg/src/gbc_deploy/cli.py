"""Command-line front end: ``gbc-deploy {compute,place,oracle,evolve}``.

JSON goes to stdout, diagnostics to stderr, CSV only to explicit paths.
Exit codes: 0 success, 1 bound violation, 2 usage error, 3 resource guard.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .centrality import betweenness, group_betweenness_direct, path_betweenness_pair
from .evolve import (
    EvolutionConfig,
    penalty_trend,
    run_evolution_experiment,
    summarize,
    write_records_csv,
    write_summary_csv,
)
from .graph import GraphFormatError, all_pairs, read_edge_list
from .oracle import PathExplosionError, SearchTooLargeError, approx_ratio_check
from .placement import DeploymentProblem, PlacementError, place_to_coverage, two_phase_place

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_GUARD = 3

THREADS_ENV = "GBC_DEPLOY_THREADS"


class UsageError(Exception):
    pass


def _sig(x):
    """Round floats to 10 significant digits, recursively."""
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            return None
        return float(format(x, ".10g"))
    if isinstance(x, dict):
        return {k: _sig(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_sig(v) for v in x]
    return x


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(_sig(payload), indent=2, sort_keys=True) + "\n")


def _digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _manifest(command: str, params: dict, inputs=(), seeds=()) -> dict:
    return {
        "command": command,
        "params": params,
        "inputs": {str(p): _digest(p) for p in inputs},
        "version": __version__,
        "seeds": list(seeds),
    }


def _int_list(text: str, what: str) -> list[int]:
    """Parse ``"1,2,5..7"`` into ``[1, 2, 5, 6, 7]``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"bad {what} list {text!r}") from None
    return out


def _node_set(value: str, n: int, what: str, paths: list) -> list[int]:
    """Inline comma list, or a file with one node id per line."""
    if value and os.path.isfile(value):
        paths.append(value)
        lines = Path(value).read_text(encoding="utf-8").splitlines()
        text = ",".join(ln.strip() for ln in lines if ln.strip() and not ln.lstrip().startswith("#"))
    else:
        text = value
    nodes = _int_list(text, what)
    if len(set(nodes)) != len(nodes):
        raise UsageError(f"{what} contains duplicates")
    for v in nodes:
        if not 0 <= v < n:
            raise UsageError(f"{what} node {v} outside 0..{n - 1}")
    return nodes


def _load(path):
    try:
        return read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read graph: {exc}") from None
    except (GraphFormatError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_compute(args) -> int:
    g = _load(args.graph)
    spd = all_pairs(g)
    inputs = [args.graph]
    if args.bc is not None:
        nodes = _node_set(str(args.bc), g.n, "--bc", inputs)
        measure, value = "bc", betweenness(spd, nodes[0])
    elif args.gbc is not None:
        nodes = _node_set(args.gbc, g.n, "--gbc", inputs)
        measure, value = "gbc", group_betweenness_direct(g, spd, nodes)
    else:
        parts = [p.strip() for p in args.pb.split(",")]
        if len(parts) != 2:
            raise UsageError("--pb takes exactly two nodes X,Y")
        x, y = (_int_list(p, "--pb")[0] if p else None for p in parts)
        if x is None or y is None or not (0 <= x < g.n and 0 <= y < g.n):
            raise UsageError(f"--pb nodes must lie in 0..{g.n - 1}")
        nodes = [x, y]
        measure, value = "pb", path_betweenness_pair(spd, x, y)
    pairs = g.n * (g.n - 1)
    _emit(
        {
            "measure": measure,
            "nodes": nodes,
            "n": g.n,
            "m": g.m,
            "value": value,
            "coverage": value / pairs if pairs else 0.0,
            "manifest": _manifest(
                "compute", {"graph": args.graph, "measure": measure, "nodes": nodes}, inputs
            ),
        }
    )
    return EXIT_OK


def _problem(args, g, inputs, **kw) -> DeploymentProblem:
    deployed = _node_set(args.deployed, g.n, "--deployed", inputs)
    if args.candidates == "all":
        candidates = [v for v in range(g.n) if v not in set(deployed)]
    else:
        candidates = _node_set(args.candidates, g.n, "--candidates", inputs)
    try:
        return DeploymentProblem(g, frozenset(deployed), frozenset(candidates), **kw)
    except PlacementError as exc:
        raise UsageError(str(exc)) from None


def cmd_place(args) -> int:
    g = _load(args.graph)
    inputs = [args.graph]
    if args.k is not None:
        problem = _problem(args, g, inputs, budget=args.k)
        result = two_phase_place(problem)
    else:
        problem = _problem(args, g, inputs, coverage_target=args.coverage)
        result = place_to_coverage(problem)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["step", "node", "marginal", "gbc", "coverage"])
            gbc = result.gbc_initial
            pairs = g.n * (g.n - 1)
            for i, (v, gain) in enumerate(zip(result.picks, result.marginal), start=1):
                gbc += gain
                cov = gbc / pairs if pairs else 1.0
                w.writerow([i, v, format(gain, ".10g"), format(gbc, ".10g"), format(cov, ".10g")])
    params = {
        "graph": args.graph,
        "deployed": sorted(problem.deployed),
        "candidates": sorted(problem.candidates),
        "k": args.k,
        "coverage": args.coverage,
    }
    _emit(
        {
            "picks": result.picks,
            "marginal": result.marginal,
            "gbc_initial": result.gbc_initial,
            "gbc_final": result.gbc_final,
            "coverage_initial": result.coverage_initial,
            "coverage_final": result.coverage_final,
            "target_met": result.target_met,
            "manifest": _manifest("place", params, inputs),
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _load(args.graph)
    inputs = [args.graph]
    problem = _problem(args, g, inputs, budget=args.k)
    try:
        report = approx_ratio_check(problem, raise_on_violation=False)
    except (SearchTooLargeError, PathExplosionError) as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return EXIT_GUARD
    status = "PASS" if report.passed else "FAIL"
    params = {
        "graph": args.graph,
        "deployed": sorted(problem.deployed),
        "candidates": sorted(problem.candidates),
        "k": args.k,
    }
    _emit(
        {
            "greedy_value": report.greedy_value,
            "opt_value": report.opt_value,
            "ratio": report.ratio,
            "bound": report.bound,
            "picks": report.picks,
            "opt_set": list(report.best_set),
            "status": status,
            "manifest": _manifest("oracle", params, inputs),
        }
    )
    if not report.passed:
        print(f"bound violated: ratio {report.ratio:.10g} < {report.bound:.10g}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_evolve(args) -> int:
    seeds = _int_list(args.seeds, "--seeds")
    m_attach = _int_list(args.m_attach, "--m-attach")
    try:
        cfg = EvolutionConfig(
            m_attach=m_attach,
            n_start=args.n_from,
            n_end=args.n_to,
            n_step=args.step,
            coverage_target=args.coverage,
            seeds=seeds,
            threads=args.threads,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    records = run_evolution_experiment(cfg)
    summary = summarize(records)
    if args.out:
        write_records_csv(records, args.out)
    if args.summary:
        write_summary_csv(summary, args.summary)
    params = {
        "m_attach": list(cfg.m_attach),
        "from": cfg.n_start,
        "to": cfg.n_end,
        "step": cfg.n_step,
        "coverage": cfg.coverage_target,
        "out": args.out,
        "summary": args.summary,
    }
    _emit(
        {
            "records": len(records),
            "overall": summary["overall"],
            "spearman_n_vs_penalty_abs": penalty_trend(summary),
            "manifest": _manifest("evolve", params, seeds=cfg.seeds),
        }
    )
    return EXIT_OK


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gbc-deploy",
        description="Monitor placement by group betweenness centrality.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help=f"worker cap (default: ${THREADS_ENV} or 1)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="betweenness, group betweenness or path betweenness")
    p.add_argument("--graph", required=True)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--bc", metavar="NODE", type=int)
    which.add_argument("--gbc", metavar="N1,N2,...")
    which.add_argument("--pb", metavar="X,Y")
    p.set_defaults(func=cmd_compute)

    def placement_args(p, budget_only=False):
        p.add_argument("--graph", required=True)
        p.add_argument("--deployed", default="", help="comma list or file of node ids")
        p.add_argument("--candidates", default="all", help="comma list, file, or 'all'")
        if budget_only:
            p.add_argument("-k", type=int, required=True)
        else:
            goal = p.add_mutually_exclusive_group(required=True)
            goal.add_argument("-k", type=int)
            goal.add_argument("--coverage", type=float)

    p = sub.add_parser("place", help="greedy incremental placement")
    placement_args(p)
    p.add_argument("--csv", help="write per-pick table here")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("oracle", help="compare greedy with the exhaustive optimum")
    placement_args(p, budget_only=True)
    p.set_defaults(func=cmd_oracle, coverage=None)

    p = sub.add_parser("evolve", help="fresh vs incremental deployment on growing BA networks")
    p.add_argument("--m-attach", default="1,2,3")
    p.add_argument("--from", dest="n_from", type=int, default=100)
    p.add_argument("--to", dest="n_to", type=int, default=1000)
    p.add_argument("--step", type=int, default=100)
    p.add_argument("--seeds", default="1..10")
    p.add_argument("--coverage", type=float, default=0.95)
    p.add_argument("--out", help="records CSV path")
    p.add_argument("--summary", help="summary CSV path")
    p.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = _default_threads()
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

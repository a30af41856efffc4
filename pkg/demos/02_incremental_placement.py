"""Extend an existing deployment instead of starting over.

A BA network of 300 nodes already carries five monitors. We add monitors
greedily and compare with a clean-slate placement of the same total size.

Run:  python3 demos/02_incremental_placement.py
"""

from gbc_deploy import DeploymentProblem, all_pairs, place_to_coverage, two_phase_place
from gbc_deploy.centrality import group_betweenness_direct
from gbc_deploy.evolve import ba_grow, make_rng

g = ba_grow(None, 300, 2, make_rng(11, 2))
spd = all_pairs(g)
pairs = g.n * (g.n - 1)

# Pretend the operator placed monitors on a few arbitrary low-degree nodes.
deg = g.degree()
legacy = sorted(range(g.n), key=lambda v: (deg[v], v))[:5]
print(f"legacy monitors {legacy} cover {group_betweenness_direct(g, spd, legacy) / pairs:.1%}")

extended = two_phase_place(DeploymentProblem.all_candidates(g, legacy, budget=10), spd)
print(f"\n+10 monitors: {extended.picks}")
for i, gain in enumerate(extended.marginal, 1):
    print(f"  step {i:2d}: +{gain / pairs:6.2%}")
print(f"coverage {extended.coverage_initial:.1%} -> {extended.coverage_final:.1%}")

fresh = two_phase_place(DeploymentProblem.all_candidates(g, budget=15), spd)
print(f"\nfresh placement of 15 monitors covers {fresh.coverage_final:.1%}")

# How many monitors does each strategy need for 90% coverage?
inc = place_to_coverage(DeploymentProblem.all_candidates(g, legacy, coverage_target=0.9), spd)
new = place_to_coverage(DeploymentProblem.all_candidates(g, coverage_target=0.9), spd)
print(f"\n90% coverage: fresh needs {new.monitors}, extension needs {len(legacy)} + {inc.monitors}")
print("timings (s):", {k: round(v, 4) for k, v in inc.timings.items()})

"""Greedy versus the exhaustive optimum on small random graphs.

Run:  python3 demos/03_approximation_check.py
"""

import numpy as np

from gbc_deploy import DeploymentProblem
from gbc_deploy.evolve import ba_grow, make_rng
from gbc_deploy.oracle import approx_ratio_check

rng = np.random.default_rng(5)
ratios = {1: [], 2: [], 3: []}
for trial in range(60):
    g = ba_grow(None, int(rng.integers(8, 14)), 1 + trial % 2, make_rng(trial, 1 + trial % 2))
    deployed = [int(v) for v in rng.choice(g.n, size=2, replace=False)]
    cands = [v for v in range(g.n) if v not in deployed][:10]
    k = 1 + trial % 3
    report = approx_ratio_check(DeploymentProblem(g, deployed, cands, budget=k))
    ratios[k].append(report.ratio)

for k, rs in ratios.items():
    bound = 1 - (1 - 1 / k) ** k
    print(f"k={k}: bound {bound:.3f}  worst {min(rs):.3f}  mean {np.mean(rs):.3f}  optimal in {sum(r > 1 - 1e-9 for r in rs)}/{len(rs)}")

"""Price of keeping monitors in place while a network grows.

A reduced version of the full experiment (``gbc-deploy evolve`` runs the
whole grid). Each series grows one BA network and, at each snapshot, reaches
95% coverage both from scratch and by extending the previous deployment.

Run:  python3 demos/04_evolving_network.py
"""

from gbc_deploy.evolve import EvolutionConfig, penalty_trend, run_evolution_experiment, summarize

cfg = EvolutionConfig(m_attach=(1, 2), n_start=50, n_end=300, n_step=50, seeds=range(1, 4))
records = run_evolution_experiment(cfg)

print(" m  seed    n  fresh  incr  penalty")
for r in records:
    print(f"{r.m_attach:2d} {r.seed:5d} {r.n:4d} {r.monitors_fresh:6d} {r.monitors_incremental:5d} {r.penalty_rel:8.1%}")

summary = summarize(records)
o = summary["overall"]
print(f"\nmean relative penalty {o['mean_penalty_rel']:.1%}, max {o['max_penalty_rel']:.1%}")
print(f"Spearman(n, mean absolute penalty) = {penalty_trend(summary):.2f}")

"""Walk through the three centrality measures on the six-node sample network.

Run:  python3 demos/01_sample_network.py
"""

from importlib import resources

from gbc_deploy import all_pairs, read_edge_list
from gbc_deploy.centrality import betweenness, group_betweenness_direct, path_betweenness_pair

g = read_edge_list(str(resources.files("gbc_deploy").joinpath("data/fig1.edges")))
spd = all_pairs(g)
print(f"{g.n} nodes, {g.m} links, {g.n * (g.n - 1)} ordered pairs")
print("edges:", g.sorted_edges())

# Node 1 reaches node 4 three hops away along three distinct routes.
print(f"\nshortest 1-4 paths: {spd.sigma[1, 4]:g} of length {spd.dist[1, 4]}")

print("\nbetweenness (endpoint pairs included):")
for v in range(g.n):
    print(f"  node {v}: {betweenness(spd, v):8.4f}")

# A pair of monitors overlaps: GBC is less than the sum of the two BCs.
# Path betweenness of (2, 3) in both directions measures that overlap.
bc2, bc3 = betweenness(spd, 2), betweenness(spd, 3)
gbc = group_betweenness_direct(g, spd, [2, 3])
pb = path_betweenness_pair(spd, 2, 3) + path_betweenness_pair(spd, 3, 2)
print(f"\nBC(2) + BC(3)        = {bc2 + bc3:.4f}")
print(f"GBC({{2, 3}})          = {gbc:.4f}")
print(f"PB(2,3) + PB(3,2)    = {pb:.4f}")
print(f"BC(2)+BC(3)-PB-PB    = {bc2 + bc3 - pb:.4f}  (inclusion-exclusion, equals GBC)")

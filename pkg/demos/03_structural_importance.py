"""
Structural importance and voting power
======================================

Without component reliabilities, importance depends only on how often a
component is critical.  Two classical measures coincide with power indices of
simple voting games: Birnbaum structural importance is the Banzhaf index and
Barlow-Proschan structural importance is the Shapley-Shubik index.
"""

from relimp import (
    banzhaf_all,
    birnbaum_structural_all,
    bp_structural_all,
    critical_path_counts,
    data_path,
    shapley_shubik_all,
)
from relimp.io import load_system

# Two components in series with a parallel block of three.
phi = load_system(data_path("systems", "birstruct.json"))

# n_r(i): the number of states with r - 1 other working components where i is critical.
for i in range(1, phi.n + 1):
    print(f"component {i}: critical counts by size {critical_path_counts(phi, i)}")

print("Birnbaum structural:", birnbaum_structural_all(phi).values)
print("Banzhaf index      :", banzhaf_all(phi).values)
print("Barlow-Proschan    :", [round(v, 6) for v in bp_structural_all(phi).values])
print("Shapley-Shubik     :", [round(v, 6) for v in shapley_shubik_all(phi).values])

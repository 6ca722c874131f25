"""
Minimal paths and cuts of a two-terminal network
================================================

A small directed network carries flow from terminal A to terminal B over nine
edges.  Each edge is a component; the system works when some directed route
from A to B uses only working edges.
"""

from relimp import data_path
from relimp.io import load_system

phi = load_system(data_path("systems", "gab.json"))
print(f"components: {phi.n}")

# The minimal path sets are the routes from A to B that contain no smaller route.
print("minimal path sets:")
for k, s in enumerate(phi.minimal_paths(), start=1):
    print(f"  {k:2d}: {sorted(s)}")

# The minimal cut sets are the smallest groups of edges whose joint failure
# disconnects B from A.  They are found as the minimal paths of the dual structure.
cuts = phi.minimal_cuts()
print(f"minimal cut sets ({len(cuts)}):")
for k, s in enumerate(cuts, start=1):
    print(f"  {k:2d}: {sorted(s)}")

# {1, 6, 8} also disconnects the network, but it is not minimal: {6, 8} already does.
print("{1,6,8} is a cut:", not phi.evaluate([0 if i in (1, 6, 8) else 1 for i in range(1, 10)]))
print("{6,8} is a cut:  ", not phi.evaluate([0 if i in (6, 8) else 1 for i in range(1, 10)]))

# Expanding "at least one route works" with idempotent reduction gives the
# simple form: a multilinear polynomial with integer coefficients.
form = phi.simple_form()
print(f"simple form has {len(form)} terms")
for subset, coef in sorted(form.terms.items(), key=lambda kv: (len(kv[0]), sorted(kv[0]))):
    print(f"  {coef:+d} * x{' x'.join(str(j) for j in sorted(subset))}")

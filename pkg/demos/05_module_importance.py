"""
Importance inside a module
==========================

A module is a group of components that acts on the system only through its
own sub-structure.  Birnbaum importance then factors by the chain rule, while
the Barlow-Proschan importance of a module is the sum over its components.
"""

from relimp import (
    Exponential,
    LifetimeModel,
    ModularityError,
    birnbaum,
    birnbaum_module_chain,
    bp_module,
    bp_module_all,
    data_path,
    decompose,
)
from relimp.io import load_system

phi = load_system(data_path("systems", "birstruct.json"))
dec = decompose(phi, [3, 4, 5])
print("module structure paths    :", [sorted(s) for s in dec.module_structure.minimal_paths()])
print("organizing structure paths:", [sorted(s) for s in dec.organizer.minimal_paths()])

p = [0.9, 0.8, 0.7, 0.6, 0.5]
for i in dec.module:
    print(f"component {i}: chain rule {birnbaum_module_chain(dec, p, i):.6f}  flat {birnbaum(phi, p, i):.6f}")

model = LifetimeModel.iid(Exponential(1.0), 5)
print("Barlow-Proschan per module component:", [round(v, 6) for v in bp_module_all(dec, model).values])
print("Barlow-Proschan of the whole module :", round(bp_module(dec, model), 6))

# Not every group is a module: components 2 and 3 do not act through a common sub-structure.
try:
    decompose(phi, [2, 3])
except ModularityError as exc:
    print("decompose([2, 3]):", exc)

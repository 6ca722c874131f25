"""
Lifetime importance
===================

With random component lifetimes, the Barlow-Proschan importance of a component
is the probability that its failure is the one that brings the system down.
These probabilities sum to one over the components.
"""

import numpy as np

from relimp import (
    Exponential,
    LifetimeModel,
    Weibull,
    birnbaum_lifetime,
    bp_total_all,
    data_path,
    series,
    system_survival,
)
from relimp.io import load_system

# Two exponential components in series: the faster one causes failure with
# probability proportional to its rate.
model = LifetimeModel([Exponential(1.0), Exponential(3.0)])
print("series of two exponentials:", [round(v, 10) for v in bp_total_all(series(2), model).values])

# A mixed model on the series/parallel block system.
phi = load_system(data_path("systems", "birstruct.json"))
model = LifetimeModel([Exponential(0.5), Weibull(2.0, 3.0), Exponential(1.0), Exponential(1.5), Weibull(0.8, 2.0)])
values = bp_total_all(phi, model).values
print("block system:", [round(v, 6) for v in values], "sum", round(sum(values), 9))

# Time-dependent Birnbaum importance and the system survival curve.
for t in np.linspace(0.0, 4.0, 5):
    row = [birnbaum_lifetime(phi, model, i, t) for i in range(1, phi.n + 1)]
    print(f"t={t:.1f}  survival={system_survival(phi, model, t):.4f}  Birnbaum={np.round(row, 4).tolist()}")

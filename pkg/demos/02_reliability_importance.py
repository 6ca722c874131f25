"""
Reliability and Birnbaum importance
===================================

The reliability of a system is a multilinear polynomial in the component
reliabilities.  The Birnbaum importance of a component is the partial
derivative of that polynomial: the probability that the component is pivotal.
"""

from relimp import birnbaum_all, compound_reliability_importance, parallel, reliability, series

p = [0.95, 0.99, 0.96]

# In series every component must work, so the weakest one matters most.
print("series  : h =", round(reliability(series(3), p), 12))
print("          Birnbaum:", [round(v, 12) for v in birnbaum_all(series(3), p).values])

# In parallel one working component suffices, so the most reliable one matters most.
print("parallel: h =", round(reliability(parallel(3), p), 12))
print("          Birnbaum:", [round(v, 12) for v in birnbaum_all(parallel(3), p).values])

# The importance splits into a part for the component working and a part for it failing.
split = compound_reliability_importance(series(3), p, 1)
print(f"series component 1: functioning {split.functioning:.6f} + failure {split.failure:.6f} = {split.total:.6f}")

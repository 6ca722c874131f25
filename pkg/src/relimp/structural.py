"""Structural importance and the equivalent cooperative-game power indices.

Everything here depends on the structure alone.  The central quantity is
the critical path vector count ``n_r(i)``: the number of states in which
exactly ``r - 1`` of the other components work and component ``i`` is
pivotal.  The Birnbaum structural importance (equal to the Banzhaf index)
weights every count by ``1 / 2^(n-1)``; the Barlow-Proschan structural
importance (equal to the Shapley-Shubik index) weights ``n_r(i)`` by
``(n-r)!(r-1)!/n!``.

Weighted sums are accumulated in exact rational arithmetic and converted to
float only at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .reliability import ImportanceReport
from .structure import StructureFunction, popcounts


def _all_counts(phi: StructureFunction) -> np.ndarray:
    """``counts[i-1, r-1] = n_r(i)`` for every component, cached on ``phi``."""
    cached = phi.__dict__.get("_critical_counts")
    if cached is not None:
        return cached
    n = phi.n
    table = phi.truth_table()
    sizes = popcounts(n)
    counts = np.zeros((n, n), dtype=np.int64)
    for i in range(1, n + 1):
        shaped = table.reshape(-1, 2, 1 << (i - 1))
        pivotal = shaped[:, 1, :] & ~shaped[:, 0, :]
        others = sizes.reshape(-1, 2, 1 << (i - 1))[:, 0, :]
        counts[i - 1] = np.bincount(others[pivotal], minlength=n)[:n]
    counts.setflags(write=False)
    phi.__dict__["_critical_counts"] = counts
    return counts


def critical_path_counts(phi: StructureFunction, i: int) -> tuple:
    """``(n_1(i), ..., n_n(i))``."""
    i = phi._check_component(i)
    return tuple(int(c) for c in _all_counts(phi)[i - 1])


@lru_cache(maxsize=None)
def shapley_weights(n: int) -> tuple:
    """Exact weights ``(n-r)!(r-1)!/n!`` for ``r = 1..n``."""
    return tuple(Fraction(factorial(n - r) * factorial(r - 1), factorial(n)) for r in range(1, n + 1))


def birnbaum_structural_exact(phi: StructureFunction, i: int) -> Fraction:
    return Fraction(sum(critical_path_counts(phi, i)), 2 ** (phi.n - 1))


def bp_structural_exact(phi: StructureFunction, i: int) -> Fraction:
    counts = critical_path_counts(phi, i)
    return sum((c * w for c, w in zip(counts, shapley_weights(phi.n))), Fraction(0))


def birnbaum_structural(phi: StructureFunction, i: int) -> float:
    """Birnbaum importance at ``p = (1/2, ..., 1/2)``: ``sum_r n_r(i) / 2^(n-1)``."""
    return float(birnbaum_structural_exact(phi, i))


def bp_structural(phi: StructureFunction, i: int) -> float:
    """Barlow-Proschan structural importance ``sum_r n_r(i) (n-r)!(r-1)!/n!``."""
    return float(bp_structural_exact(phi, i))


def bp_structural_integral(phi: StructureFunction, i: int) -> Fraction:
    """``int_0^1 [h(1_i, p) - h(0_i, p)] dp`` with every other reliability equal to ``p``.

    Computed term by term from the multilinear coefficients: a term ``b_T``
    with ``i in T`` contributes ``b_T p^(|T|-1)`` to the derivative, which
    integrates to ``b_T / |T|``.
    """
    i = phi._check_component(i)
    total = Fraction(0)
    for subset, coef in phi.simple_form().terms.items():
        if i in subset:
            total += Fraction(coef, len(subset))
    return total


def bp_structural_average(phi: StructureFunction, i: int) -> Fraction:
    """Average over ``r`` of the fraction of size-``r`` vectors that are critical for ``i``."""
    n = phi.n
    counts = critical_path_counts(phi, i)
    return sum((Fraction(c, comb(n - 1, r - 1)) for r, c in enumerate(counts, start=1)), Fraction(0)) / n


@dataclass(frozen=True)
class FunctioningFailureSplit:
    functioning: float
    failure: float
    total: float


def structural_functioning_failure(phi: StructureFunction, j: int) -> FunctioningFailureSplit:
    """Structural importance for functioning and for failure of the system.

    ``functioning = 2^-n sum_x (1 - x_j) delta_j(x)`` and
    ``failure = 2^-n sum_x x_j delta_j(x)``.  ``total`` is their sum
    ``2^-n sum_x delta_j(x)``, which equals the Birnbaum structural importance.
    """
    j = phi._check_component(j)
    n = phi.n
    table = phi.truth_table()
    states = np.arange(1 << n, dtype=np.int64)
    bit = 1 << (j - 1)
    delta = table[states | bit] & ~table[states & ~bit]
    working = (states & bit) != 0
    functioning = int(np.count_nonzero(delta & ~working))
    failure = int(np.count_nonzero(delta & working))
    scale = 2.0 ** -n
    return FunctioningFailureSplit(functioning * scale, failure * scale, (functioning + failure) * scale)


def banzhaf(phi: StructureFunction, i: int) -> float:
    """Banzhaf index ``eta_i / 2^(n-1)``; coincides with :func:`birnbaum_structural`."""
    return birnbaum_structural(phi, i)


def shapley_shubik(phi: StructureFunction, i: int) -> float:
    """Shapley-Shubik index; coincides with :func:`bp_structural`."""
    return bp_structural(phi, i)


def birnbaum_structural_all(phi: StructureFunction) -> ImportanceReport:
    return ImportanceReport("birnbaum_structural", [birnbaum_structural(phi, i) for i in range(1, phi.n + 1)])


def bp_structural_all(phi: StructureFunction) -> ImportanceReport:
    values = [bp_structural_exact(phi, i) for i in range(1, phi.n + 1)]
    return ImportanceReport("bp_structural", values, normalization=float(sum(values)))


def banzhaf_all(phi: StructureFunction) -> ImportanceReport:
    return ImportanceReport("banzhaf", [banzhaf(phi, i) for i in range(1, phi.n + 1)])


def shapley_shubik_all(phi: StructureFunction) -> ImportanceReport:
    values = [bp_structural_exact(phi, i) for i in range(1, phi.n + 1)]
    return ImportanceReport("shapley_shubik", values, normalization=float(sum(values)))

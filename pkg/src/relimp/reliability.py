"""Reliability polynomial and Birnbaum reliability importance.

Components are assumed independent.  ``p[i-1]`` is the probability that
component ``i`` works.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, InputError
from .structure import And, Atom, Or, StructureFunction


@dataclass(frozen=True)
class ImportanceReport:
    """Per-component values of one importance measure.

    ``values[i-1]`` belongs to component (or player) ``i``.  ``normalization``
    records the sum the values were scaled by, when the measure is a
    normalized one.
    """

    measure: str
    values: tuple
    normalization: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        """Value for component ``i`` (1-based)."""
        if not 1 <= i <= len(self.values):
            raise IndexError(f"component {i} outside 1..{len(self.values)}")
        return self.values[i - 1]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)

    def total(self) -> float:
        return float(sum(self.values))


def as_probabilities(p: Sequence[float], n: int) -> np.ndarray:
    arr = np.asarray(p, dtype=float)
    if arr.shape != (n,):
        raise DimensionError(f"expected {n} component reliabilities, got shape {arr.shape}")
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InputError("component reliabilities must lie in [0, 1]")
    return arr


def _formula_probability(node, p: np.ndarray) -> float:
    if isinstance(node, Atom):
        return p[node.index - 1]
    probs = [_formula_probability(c, p) for c in node.children]
    if isinstance(node, And):
        return float(np.prod(probs))
    if isinstance(node, Or):
        return 1.0 - float(np.prod([1.0 - q for q in probs]))
    # distribution of the number of working children
    dist = np.zeros(len(probs) + 1)
    dist[0] = 1.0
    for q in probs:
        dist[1:] = dist[1:] * (1.0 - q) + dist[:-1] * q
        dist[0] *= 1.0 - q
    return float(dist[node.k:].sum())


def _reliability(phi: StructureFunction, p: np.ndarray) -> float:
    if phi.read_once:
        return _formula_probability(phi.formula, p)
    # pivotal decomposition on every component in turn:
    # h = p_j h(1_j, .) + (1 - p_j) h(0_j, .), each step removing the lowest bit
    t = phi.truth_table().astype(float)
    for pj in p:
        t = t.reshape(-1, 2) @ np.array([1.0 - pj, pj])
    return float(t[0])


def reliability(phi: StructureFunction, p: Sequence[float]) -> float:
    """System reliability ``h(p) = P(phi(X) = 1)``."""
    return _reliability(phi, as_probabilities(p, phi.n))


def _pinned(p: np.ndarray, i: int, value: float) -> np.ndarray:
    q = p.copy()
    q[i - 1] = value
    return q


def birnbaum(phi: StructureFunction, p: Sequence[float], i: int) -> float:
    """Birnbaum importance ``h(1_i, p) - h(0_i, p)``, the partial derivative of ``h``."""
    arr = as_probabilities(p, phi.n)
    i = phi._check_component(i)
    return _reliability(phi, _pinned(arr, i, 1.0)) - _reliability(phi, _pinned(arr, i, 0.0))


def birnbaum_all(phi: StructureFunction, p: Sequence[float]) -> ImportanceReport:
    arr = as_probabilities(p, phi.n)
    values = [
        _reliability(phi, _pinned(arr, i, 1.0)) - _reliability(phi, _pinned(arr, i, 0.0))
        for i in range(1, phi.n + 1)
    ]
    return ImportanceReport("birnbaum", values)


@dataclass(frozen=True)
class CompoundImportance:
    """Split of the Birnbaum importance into functioning and failure parts.

    ``functioning = P(phi=1 | X_i=1) - P(phi=1)`` and
    ``failure = P(phi=0 | X_i=0) - P(phi=0)``.  When the system reliability
    is 0 or 1, or ``p_i`` is 0 or 1, the parts are reported as NaN and
    ``defined`` is False; ``total`` is always the Birnbaum importance.
    """

    functioning: float
    failure: float
    total: float
    defined: bool


def compound_reliability_importance(phi: StructureFunction, p: Sequence[float], i: int) -> CompoundImportance:
    arr = as_probabilities(p, phi.n)
    i = phi._check_component(i)
    h = _reliability(phi, arr)
    h1 = _reliability(phi, _pinned(arr, i, 1.0))
    h0 = _reliability(phi, _pinned(arr, i, 0.0))
    total = h1 - h0
    defined = 0.0 < h < 1.0 and 0.0 < arr[i - 1] < 1.0
    if not defined:
        return CompoundImportance(float("nan"), float("nan"), total, False)
    return CompoundImportance(h1 - h, (1.0 - h0) - (1.0 - h), total, True)

"""Modules of coherent systems and module importance.

A set ``M`` of components is a module of ``phi`` when

    phi(x) = Psi[chi(x^M), x^(M^c)]

for some coherent module structure ``chi`` over ``M`` and organizing
structure ``Psi``.  The organizer has one position per component outside
``M`` plus one slot for the module; positions follow the flat component
order with the module slot placed where ``min(M)`` sits.  For a contiguous
``M`` this makes ``Psi.compose(slot, chi)`` reproduce ``phi`` exactly.

Two notions of module importance are provided.  Birnbaum's chain rule
multiplies the importance of the module for the system by the importance
of the component for the module.  Barlow and Proschan integrate the product
of the two pivot probabilities against the component's failure
distribution; that integral does not factor into a product of integrals.

The module reliability function is called ``module_reliability`` here to
keep it apart from lifetime densities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, InputError, ModularityError
from .lifetime import LifetimeModel, integrate_failure_measure
from .reliability import ImportanceReport, _pinned, _reliability, as_probabilities
from .structure import StructureFunction


@dataclass(frozen=True)
class ModuleDecomposition:
    phi: StructureFunction
    module: tuple  # sorted flat indices in M
    complement: tuple  # sorted flat indices outside M
    organizer: StructureFunction  # Psi
    module_structure: StructureFunction  # chi, component k is module[k-1]
    module_position: int  # slot of the module inside Psi
    outer_components: tuple  # flat index per Psi position, 0 for the module slot

    def module_index(self, i: int) -> int:
        """Position of flat component ``i`` inside the module structure."""
        try:
            return self.module.index(i) + 1
        except ValueError:
            raise InputError(f"component {i} is not in the module {list(self.module)}") from None

    def split(self, values: np.ndarray) -> tuple:
        """Module part and organizer part (module slot left at NaN) of a flat vector."""
        inner = np.array([values[i - 1] for i in self.module])
        outer = np.array([values[k - 1] if k else np.nan for k in self.outer_components])
        return inner, outer


def _scatter(indices: Sequence[int], count: int) -> np.ndarray:
    """Flat packed masks for every assignment of the listed components."""
    masks = np.zeros(1, dtype=np.int64)
    for comp in indices:
        masks = np.concatenate([masks, masks | (1 << (comp - 1))])
    assert masks.size == 1 << count
    return masks


def _bits(value: int, width: int) -> tuple:
    return tuple((value >> k) & 1 for k in range(width))


def decompose(phi: StructureFunction, module: Sequence[int]) -> ModuleDecomposition:
    """Split ``phi`` into organizer and module structure for the component set ``module``.

    Raises :class:`ModularityError` with a witness pair of complement states
    when ``module`` is not a modular set.
    """
    members = tuple(sorted({int(i) for i in module}))
    if not members:
        raise InputError("module must contain at least one component")
    for i in members:
        phi._check_component(i)
    comp = tuple(i for i in range(1, phi.n + 1) if i not in members)
    m, k = len(members), len(comp)
    table = phi.truth_table()
    rows = table[_scatter(comp, k)[:, None] | _scatter(members, m)[None, :]]

    constant = rows.all(axis=1) | ~rows.any(axis=1)
    varying = np.flatnonzero(~constant)
    if varying.size == 0:
        raise ModularityError(f"components {list(members)} are irrelevant to the structure")
    chi_row = rows[varying[0]]
    for c in varying[1:]:
        if not np.array_equal(rows[c], chi_row):
            witness = (_bits(int(varying[0]), k), _bits(int(c), k))
            raise ModularityError(
                f"components {list(members)} do not form a module: the structure restricted to them "
                f"differs between complement states {witness[0]} and {witness[1]}",
                witness=witness,
            )
    chi = StructureFunction.from_truth_table(chi_row, m)
    if not chi.is_semicoherent():
        raise ModularityError(f"restriction to {list(members)} is not a coherent module structure")

    positions = sorted(comp + (members[0],))
    slot = positions.index(members[0]) + 1
    outer_components = tuple(0 if p == members[0] else p for p in positions)
    # Psi(y, c) = phi with the module all-working (y=1) or all-failed (y=0)
    psi_masks = np.arange(1 << (k + 1), dtype=np.int64)
    psi_table = np.empty(psi_masks.size, dtype=bool)
    for mask in psi_masks:
        c_index = 0
        for pos, flat in enumerate(outer_components):
            if flat and (mask >> pos) & 1:
                c_index |= 1 << comp.index(flat)
        y = (mask >> (slot - 1)) & 1
        psi_table[mask] = rows[c_index, -1 if y else 0]
    psi = StructureFunction.from_truth_table(psi_table, k + 1)

    dec = ModuleDecomposition(phi, members, comp, psi, chi, slot, outer_components)
    _verify(dec, table)
    return dec


def _verify(dec: ModuleDecomposition, table: np.ndarray) -> None:
    n = dec.phi.n
    states = np.arange(1 << n, dtype=np.int64)
    inner = np.zeros_like(states)
    for pos, flat in enumerate(dec.module):
        inner |= ((states >> (flat - 1)) & 1) << pos
    chi_val = dec.module_structure.truth_table()[inner].astype(np.int64)
    outer = np.zeros_like(states)
    for pos, flat in enumerate(dec.outer_components):
        src = chi_val if flat == 0 else (states >> (flat - 1)) & 1
        outer |= src << pos
    mismatch = np.flatnonzero(dec.organizer.truth_table()[outer] != table)
    if mismatch.size:
        raise ModularityError(f"decomposition identity fails at state {_bits(int(mismatch[0]), n)}")


def module_reliability(dec: ModuleDecomposition, p: Sequence[float]) -> float:
    """Reliability of the module structure at the module components' reliabilities."""
    arr = as_probabilities(p, dec.phi.n)
    inner, _ = dec.split(arr)
    return _reliability(dec.module_structure, inner)


def _module_pivot(dec: ModuleDecomposition, outer: np.ndarray) -> float:
    """``h(1^M, p) - h(0^M, p)``: the module is pivotal for the system."""
    slot = dec.module_position
    return _reliability(dec.organizer, _pinned(outer, slot, 1.0)) - _reliability(
        dec.organizer, _pinned(outer, slot, 0.0)
    )


def birnbaum_module_chain(dec: ModuleDecomposition, p: Sequence[float], i: int) -> float:
    """Birnbaum importance of ``i in M`` by the chain rule.

    Importance of the module for the organizer (module slot at the module's
    reliability) times importance of ``i`` for the module structure.
    """
    arr = as_probabilities(p, dec.phi.n)
    k = dec.module_index(i)
    inner, outer = dec.split(arr)
    outer[dec.module_position - 1] = _reliability(dec.module_structure, inner)
    chi = dec.module_structure
    for_module = _reliability(chi, _pinned(inner, k, 1.0)) - _reliability(chi, _pinned(inner, k, 0.0))
    return _module_pivot(dec, outer) * for_module


def bp_module_component(dec: ModuleDecomposition, model: LifetimeModel, i: int) -> float:
    """Barlow-Proschan importance of ``i in M`` computed through the module.

    ``int_0^inf [h(1^M, Q(t)) - h(0^M, Q(t))] [g(1_i, Q^M(t)) - g(0_i, Q^M(t))] dF_i(t)``
    with ``g`` the module reliability function.
    """
    if model.n != dec.phi.n:
        raise DimensionError(f"lifetime model has {model.n} components, structure has {dec.phi.n}")
    k = dec.module_index(i)
    chi = dec.module_structure

    def weight(q):
        inner, outer = dec.split(q)
        for_module = _reliability(chi, _pinned(inner, k, 1.0)) - _reliability(chi, _pinned(inner, k, 0.0))
        return _module_pivot(dec, outer) * for_module

    return integrate_failure_measure(model, i, float("inf"), weight)


def bp_module(dec: ModuleDecomposition, model: LifetimeModel) -> float:
    """Probability that the module causes system failure: the sum over its components."""
    return float(sum(bp_module_component(dec, model, i) for i in dec.module))


def bp_module_all(dec: ModuleDecomposition, model: LifetimeModel) -> ImportanceReport:
    values = [bp_module_component(dec, model, i) for i in dec.module]
    return ImportanceReport("bp_module", values, normalization=float(sum(values)), meta={"module": list(dec.module)})

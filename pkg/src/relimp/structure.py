"""Binary monotone structure functions.

A structure on ``n`` components maps a state vector ``x`` in ``{0,1}^n`` to
the system state.  Components are numbered ``1..n``.  Whenever states are
packed into integers, component ``i`` occupies bit ``i - 1`` (component 1 is
the least significant bit); truth tables are indexed by that integer.

Four construction routes are supported and agree on every state:

* a monotone formula built from :class:`Atom`, :class:`And`, :class:`Or` and
  :class:`KOutOfN` nodes,
* an explicit truth table,
* a family of path sets (``phi(x) = 1`` iff some set is fully working),
* a directed two-terminal graph whose edges are the components.

Structures are immutable.  Truth tables, minimal path/cut families and the
multilinear coefficients are computed lazily and cached.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, DimensionError, InputError

ENV_MAX_COMPONENTS = "RELIMP_MAX_COMPONENTS"
DEFAULT_MAX_COMPONENTS = 24

SetFamily = tuple  # tuple[frozenset[int], ...] in canonical order


def max_components() -> int:
    """Largest ``n`` accepted by exhaustive 2^n algorithms.

    Defaults to 24 and can be overridden with the ``RELIMP_MAX_COMPONENTS``
    environment variable.
    """
    raw = os.environ.get(ENV_MAX_COMPONENTS)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_COMPONENTS
    try:
        value = int(raw)
    except ValueError as exc:
        raise InputError(f"{ENV_MAX_COMPONENTS} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InputError(f"{ENV_MAX_COMPONENTS} must be positive, got {value}")
    return value


def check_capacity(n: int) -> None:
    cap = max_components()
    if n > cap:
        raise CapacityError(
            f"exhaustive enumeration over 2^{n} states exceeds the cap of 2^{cap} "
            f"(set {ENV_MAX_COMPONENTS} to raise it)"
        )


# ---------------------------------------------------------------------------
# Formula syntax
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    index: int


@dataclass(frozen=True)
class And:
    children: tuple

    def __init__(self, *children):
        object.__setattr__(self, "children", _flatten_children(children))


@dataclass(frozen=True)
class Or:
    children: tuple

    def __init__(self, *children):
        object.__setattr__(self, "children", _flatten_children(children))


@dataclass(frozen=True)
class KOutOfN:
    """Works when at least ``k`` of the children work."""

    k: int
    children: tuple

    def __init__(self, k, *children):
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "children", _flatten_children(children))


Formula = Union[Atom, And, Or, KOutOfN]


def _flatten_children(children) -> tuple:
    if len(children) == 1 and not isinstance(children[0], (Atom, And, Or, KOutOfN, int, np.integer)):
        children = tuple(children[0])
    return tuple(Atom(c) if isinstance(c, (int, np.integer)) else c for c in children)


def formula_atoms(node: Formula) -> list[int]:
    """All atom indices of a formula, with repetitions, in left-to-right order."""
    if isinstance(node, Atom):
        return [node.index]
    out: list[int] = []
    for child in node.children:
        out.extend(formula_atoms(child))
    return out


def _validate_formula(node, n: int) -> None:
    if isinstance(node, Atom):
        if not 1 <= node.index <= n:
            raise InputError(f"atom index {node.index} outside 1..{n}")
        return
    if not isinstance(node, (And, Or, KOutOfN)):
        raise InputError(f"unsupported formula node {node!r}")
    if not node.children:
        raise InputError(f"{type(node).__name__} node needs at least one child")
    if isinstance(node, KOutOfN) and not 1 <= node.k <= len(node.children):
        raise InputError(f"k-out-of-n node needs 1 <= k <= {len(node.children)}, got k={node.k}")
    for child in node.children:
        _validate_formula(child, n)


def _eval_formula(node: Formula, masks: np.ndarray) -> np.ndarray:
    if isinstance(node, Atom):
        return ((masks >> (node.index - 1)) & 1).astype(bool)
    parts = [_eval_formula(child, masks) for child in node.children]
    if isinstance(node, And):
        return np.logical_and.reduce(parts)
    if isinstance(node, Or):
        return np.logical_or.reduce(parts)
    total = np.zeros(masks.shape, dtype=np.int32)
    for part in parts:
        total += part
    return total >= node.k


def _dual_formula(node: Formula) -> Formula:
    if isinstance(node, Atom):
        return node
    children = tuple(_dual_formula(c) for c in node.children)
    if isinstance(node, And):
        return Or(*children)
    if isinstance(node, Or):
        return And(*children)
    return KOutOfN(len(children) - node.k + 1, *children)


def _reindex_formula(node: Formula, mapping) -> Formula:
    if isinstance(node, Atom):
        return mapping(node.index)
    children = tuple(_reindex_formula(c, mapping) for c in node.children)
    if isinstance(node, KOutOfN):
        return KOutOfN(node.k, *children)
    return type(node)(*children)


# ---------------------------------------------------------------------------
# Set families
# ---------------------------------------------------------------------------


def canonical_family(sets: Iterable[Iterable[int]]) -> SetFamily:
    """Deduplicate and sort sets by size, then lexicographically."""
    unique = {frozenset(int(i) for i in s) for s in sets}
    return tuple(sorted(unique, key=lambda s: (len(s), sorted(s))))


def minimal_sets(sets: Iterable[Iterable[int]]) -> SetFamily:
    """Antichain reduction: drop every set that contains another member."""
    family = canonical_family(sets)
    kept: list[frozenset] = []
    for s in family:  # size-ascending, so a subset is always seen first
        if not any(k <= s for k in kept):
            kept.append(s)
    return tuple(kept)


def _mask_of(s: Iterable[int]) -> int:
    m = 0
    for i in s:
        m |= 1 << (int(i) - 1)
    return m


def _set_of(mask: int) -> frozenset:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def popcounts(n: int) -> np.ndarray:
    """Number of working components for every packed state of ``n`` components."""
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        counts = np.concatenate([counts, counts + 1])
    return counts


# ---------------------------------------------------------------------------
# Two-terminal graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoTerminalGraph:
    nodes: tuple
    edges: tuple  # ((tail, head), ...) edge k+1 is edges[k]
    source: object
    target: object

    def simple_path_edge_sets(self) -> list[frozenset]:
        adjacency: dict = {v: [] for v in self.nodes}
        for idx, (tail, head) in enumerate(self.edges, start=1):
            adjacency[tail].append((idx, head))
        found: list[frozenset] = []
        visited = {self.source}
        used: list[int] = []

        def walk(node):
            if node == self.target:
                found.append(frozenset(used))
                return
            for idx, head in adjacency[node]:
                if head in visited:
                    continue
                visited.add(head)
                used.append(idx)
                walk(head)
                used.pop()
                visited.remove(head)

        walk(self.source)
        return found


# ---------------------------------------------------------------------------
# Simple (multilinear) form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SimpleForm:
    """Multilinear polynomial ``sum_T b_T prod_{j in T} x_j`` with integer ``b_T``.

    Only nonzero coefficients are stored.  The empty set is the constant term.
    """

    n: int
    terms: dict

    def __call__(self, values: Sequence[float]) -> float:
        values = np.asarray(values, dtype=float)
        if values.shape != (self.n,):
            raise DimensionError(f"expected {self.n} values, got shape {values.shape}")
        total = 0.0
        for subset, coef in self.terms.items():
            prod = 1.0
            for j in subset:
                prod *= values[j - 1]
            total += coef * prod
        return total

    def __len__(self) -> int:
        return len(self.terms)


# ---------------------------------------------------------------------------
# Structure functions
# ---------------------------------------------------------------------------


def _as_state_mask(x: Sequence[int], n: int) -> int:
    states = list(x)
    if len(states) != n:
        raise DimensionError(f"state vector has length {len(states)}, structure has {n} components")
    mask = 0
    for i, v in enumerate(states):
        if v in (1, True):
            mask |= 1 << i
        elif v not in (0, False):
            raise InputError(f"state entries must be 0 or 1, got {v!r} at component {i + 1}")
    return mask


class StructureFunction:
    """A monotone boolean function of ``n`` components.

    Use the ``from_*`` constructors or :func:`series`, :func:`parallel` and
    :func:`k_out_of_n` rather than calling ``__init__`` directly.
    """

    _KINDS = ("formula", "table", "paths", "graph", "composite")

    def __init__(self, n: int, kind: str, payload):
        if kind not in self._KINDS:
            raise ValueError(f"unknown backend {kind!r}")
        if n < 1:
            raise InputError("a structure needs at least one component")
        self._n = int(n)
        self._kind = kind
        self._payload = payload

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_formula(cls, formula: Formula, n: int | None = None) -> "StructureFunction":
        if n is None:
            n = max(formula_atoms(formula))
        _validate_formula(formula, n)
        return cls(n, "formula", formula)

    @classmethod
    def from_truth_table(cls, table, n: int | None = None) -> "StructureFunction":
        """Build from ``2^n`` values indexed by packed state (component 1 = bit 0).

        ``table`` may be a sequence of 0/1 values or a string of '0'/'1'
        characters where character ``k`` is the value at packed state ``k``.
        """
        if isinstance(table, str):
            if set(table) - {"0", "1"}:
                raise InputError("truth table strings may only contain '0' and '1'")
            bits = np.frombuffer(table.encode("ascii"), dtype=np.uint8) == ord("1")
        else:
            raw = np.asarray(table)
            if raw.size and not np.isin(raw, (0, 1)).all():
                raise InputError("truth table entries must be 0 or 1")
            bits = raw.astype(bool).ravel()
        size = bits.size
        if size < 2 or size & (size - 1):
            raise InputError(f"truth table length must be a power of two >= 2, got {size}")
        inferred = size.bit_length() - 1
        if n is not None and n != inferred:
            raise InputError(f"truth table of length {size} does not match n={n}")
        check_capacity(inferred)
        bits = bits.copy()
        bits.setflags(write=False)
        return cls(inferred, "table", bits)

    @classmethod
    def from_minimal_paths(cls, n: int, family: Iterable[Iterable[int]]) -> "StructureFunction":
        """Structure that works iff some member of ``family`` is fully working.

        The family is reduced to its antichain of minimal members.
        """
        sets = [frozenset(int(i) for i in s) for s in family]
        if not sets:
            raise InputError("path family must be nonempty")
        for s in sets:
            if not s:
                raise InputError("path sets must be nonempty")
            bad = [i for i in s if not 1 <= i <= n]
            if bad:
                raise InputError(f"path set members {sorted(bad)} outside 1..{n}")
        return cls(n, "paths", minimal_sets(sets))

    @classmethod
    def from_two_terminal_graph(cls, nodes, edges, source, target) -> "StructureFunction":
        """Edges of a directed graph as components; works iff ``source`` reaches ``target``.

        ``edges`` is a sequence of ``(tail, head)`` pairs; edge ``k`` (1-based,
        input order) is component ``k``.  Parallel edges are allowed.
        """
        nodes = tuple(nodes)
        edges = tuple((u, v) for u, v in edges)
        if source == target:
            raise InputError("source and target must differ")
        known = set(nodes)
        for label in (source, target):
            if label not in known:
                raise InputError(f"terminal {label!r} is not a graph node")
        for k, (u, v) in enumerate(edges, start=1):
            if u not in known or v not in known:
                raise InputError(f"edge {k} ({u!r} -> {v!r}) references an unknown node")
        if not edges:
            raise InputError("graph has no edges")
        graph = TwoTerminalGraph(nodes, edges, source, target)
        paths = graph.simple_path_edge_sets()
        if not paths:
            raise InputError(f"target {target!r} is unreachable from {source!r} even with all edges working")
        return cls(len(edges), "graph", (graph, minimal_sets(paths)))

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def backend(self) -> str:
        return self._kind

    @property
    def formula(self) -> Formula | None:
        return self._payload if self._kind == "formula" else None

    @property
    def graph(self) -> TwoTerminalGraph | None:
        return self._payload[0] if self._kind == "graph" else None

    @cached_property
    def read_once(self) -> bool:
        """True for a formula in which every component appears exactly once."""
        if self._kind != "formula":
            return False
        atoms = formula_atoms(self._payload)
        return len(atoms) == len(set(atoms))

    def __repr__(self) -> str:
        return f"StructureFunction(n={self._n}, backend={self._kind!r})"

    # -- evaluation ---------------------------------------------------------

    def _eval_masks(self, masks: np.ndarray) -> np.ndarray:
        kind = self._kind
        if kind == "formula":
            return _eval_formula(self._payload, masks)
        if kind == "table":
            return self._payload[masks]
        if kind in ("paths", "graph"):
            family = self._payload if kind == "paths" else self._payload[1]
            out = np.zeros(masks.shape, dtype=bool)
            for s in family:
                m = _mask_of(s)
                out |= (masks & m) == m
            return out
        outer, position, inner = self._payload
        m = inner.n
        low = masks & ((1 << (position - 1)) - 1)
        mid = (masks >> (position - 1)) & ((1 << m) - 1)
        high = masks >> (position - 1 + m)
        inner_val = inner._eval_masks(mid).astype(np.int64)
        return outer._eval_masks(low | (inner_val << (position - 1)) | (high << position))

    def evaluate(self, x: Sequence[int]) -> int:
        """System state for the state vector ``x``."""
        mask = _as_state_mask(x, self._n)
        return int(self._eval_masks(np.array([mask], dtype=np.int64))[0])

    __call__ = evaluate

    def truth_table(self) -> np.ndarray:
        """Read-only boolean array of length ``2^n`` indexed by packed state."""
        return self._table

    @cached_property
    def _table(self) -> np.ndarray:
        if self._kind == "table":
            return self._payload
        check_capacity(self._n)
        table = self._eval_masks(np.arange(1 << self._n, dtype=np.int64))
        table.setflags(write=False)
        return table

    def same_function(self, other: "StructureFunction") -> bool:
        """Truth-table equality."""
        return self._n == other._n and bool(np.array_equal(self._table, other._table))

    def _check_component(self, i: int) -> int:
        if not isinstance(i, (int, np.integer)) or not 1 <= i <= self._n:
            raise DimensionError(f"component index {i!r} outside 1..{self._n}")
        return int(i)

    def delta(self, j: int, x: Sequence[int]) -> int:
        """``phi(1_j, x) - phi(0_j, x)``: 1 when component ``j`` is pivotal at ``x``."""
        j = self._check_component(j)
        mask = _as_state_mask(x, self._n)
        bit = 1 << (j - 1)
        vals = self._eval_masks(np.array([mask | bit, mask & ~bit], dtype=np.int64))
        return int(vals[0]) - int(vals[1])

    def mu(self, j: int, x: Sequence[int]) -> int:
        """``phi(0_j, x)``."""
        j = self._check_component(j)
        mask = _as_state_mask(x, self._n) & ~(1 << (j - 1))
        return int(self._eval_masks(np.array([mask], dtype=np.int64))[0])

    def _halves(self, j: int, table: np.ndarray | None = None):
        """Views of the table with component ``j`` failed / working."""
        t = self._table if table is None else table
        shaped = t.reshape(-1, 2, 1 << (j - 1))
        return shaped[:, 0, :], shaped[:, 1, :]

    # -- classification ------------------------------------------------------

    def is_relevant(self, i: int) -> bool:
        i = self._check_component(i)
        lo, hi = self._halves(i)
        return bool(np.any(lo != hi))

    def is_monotone(self) -> bool:
        for j in range(1, self._n + 1):
            lo, hi = self._halves(j)
            if np.any(lo & ~hi):
                return False
        return True

    def is_semicoherent(self) -> bool:
        """Monotone with a failed all-failed state and a working all-working state."""
        t = self._table
        return bool(not t[0] and t[-1]) and self.is_monotone()

    def is_coherent(self) -> bool:
        return self.is_semicoherent() and all(self.is_relevant(i) for i in range(1, self._n + 1))

    # -- transformations ------------------------------------------------------

    def dual(self) -> "StructureFunction":
        """``phi^D(x) = 1 - phi(1 - x)``."""
        if self._kind == "formula":
            return StructureFunction(self._n, "formula", _dual_formula(self._payload))
        t = self._table
        return StructureFunction.from_truth_table(~t[::-1], self._n)

    def compose(self, position: int, inner: "StructureFunction") -> "StructureFunction":
        """Substitute the module ``inner`` for component ``position``.

        The result has ``n - 1 + inner.n`` components.  Components before
        ``position`` keep their index, the inner components occupy
        ``position .. position + inner.n - 1`` and the remaining outer
        components shift up by ``inner.n - 1``.
        """
        if not isinstance(position, (int, np.integer)) or not 1 <= position <= self._n:
            raise InputError(f"position {position!r} outside 1..{self._n}")
        m = inner.n
        total = self._n - 1 + m
        if self._kind == "formula" and inner._kind == "formula":
            shifted = _reindex_formula(inner._payload, lambda k: Atom(k + position - 1))

            def mapping(k):
                if k < position:
                    return Atom(k)
                if k == position:
                    return shifted
                return Atom(k + m - 1)

            return StructureFunction(total, "formula", _reindex_formula(self._payload, mapping))
        return StructureFunction(total, "composite", (self, int(position), inner))

    # -- minimal paths and cuts -----------------------------------------------

    def minimal_paths(self) -> SetFamily:
        """Minimal path sets in canonical order (size, then lexicographic)."""
        return self._minimal_paths

    @cached_property
    def _minimal_paths(self) -> SetFamily:
        if self._kind == "paths":
            return self._payload
        if self._kind == "graph":
            return self._payload[1]
        if not self.is_monotone():
            raise InputError("minimal path sets are only defined for monotone structures")
        return _minimal_true_points(self._table, self._n)

    def minimal_cuts(self) -> SetFamily:
        """Minimal cut sets in canonical order."""
        return self._minimal_cuts

    @cached_property
    def _minimal_cuts(self) -> SetFamily:
        if not self.is_monotone():
            raise InputError("minimal cut sets are only defined for monotone structures")
        return _minimal_true_points(~self._table[::-1], self._n)

    # -- multilinear form -------------------------------------------------------

    @cached_property
    def _mobius(self) -> np.ndarray:
        coef = self._table.astype(np.int64)
        for j in range(1, self._n + 1):
            shaped = coef.reshape(-1, 2, 1 << (j - 1))
            shaped[:, 1, :] -= shaped[:, 0, :]
        coef.setflags(write=False)
        return coef

    def simple_form(self) -> SimpleForm:
        """The unique multilinear polynomial agreeing with the structure on ``{0,1}^n``."""
        coef = self._mobius
        terms = {_set_of(int(mask)): int(coef[mask]) for mask in np.flatnonzero(coef)}
        return SimpleForm(self._n, terms)


def _minimal_true_points(table: np.ndarray, n: int) -> SetFamily:
    # a true point is minimal iff dropping any single working component makes it false
    minimal = table.copy()
    for j in range(1, n + 1):
        lo_t = table.reshape(-1, 2, 1 << (j - 1))
        shaped = minimal.reshape(-1, 2, 1 << (j - 1))
        shaped[:, 1, :] &= ~lo_t[:, 0, :]
    return canonical_family(_set_of(int(m)) for m in np.flatnonzero(minimal))


# ---------------------------------------------------------------------------
# Convenience constructors
# ---------------------------------------------------------------------------


def series(n: int) -> StructureFunction:
    return StructureFunction.from_formula(And(*range(1, n + 1)), n)


def parallel(n: int) -> StructureFunction:
    return StructureFunction.from_formula(Or(*range(1, n + 1)), n)


def k_out_of_n(k: int, n: int) -> StructureFunction:
    return StructureFunction.from_formula(KOutOfN(k, *range(1, n + 1)), n)


def identity() -> StructureFunction:
    """The one-component structure ``phi(x) = x_1``."""
    return StructureFunction.from_formula(Atom(1), 1)


def from_minimal_paths(n: int, family) -> StructureFunction:
    return StructureFunction.from_minimal_paths(n, family)


def from_two_terminal_graph(nodes, edges, source, target) -> StructureFunction:
    return StructureFunction.from_two_terminal_graph(nodes, edges, source, target)


def compose(outer: StructureFunction, position: int, inner: StructureFunction) -> StructureFunction:
    return outer.compose(position, inner)


def dual(phi: StructureFunction) -> StructureFunction:
    return phi.dual()

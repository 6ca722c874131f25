"""JSON input files and CSV/JSON result emission.

Three input documents are understood.

System file
    A JSON object with exactly one of ``formula``, ``minimal_paths``,
    ``truth_table`` or ``graph``::

        {"formula": {"op": "and", "args": [{"atom": 1},
                     {"op": "kofn", "k": 2, "args": [{"atom": 2}, {"atom": 3}, {"atom": 4}]}]}}
        {"n": 4, "minimal_paths": [[1, 2], [3, 4]]}
        {"n": 2, "truth_table": "0001"}
        {"graph": {"nodes": ["s", "t"], "edges": [{"id": 1, "from": "s", "to": "t"}],
                   "source": "s", "target": "t"}}

    Character ``k`` of a truth table is the system state at the packed state
    ``k`` (component 1 is the least significant bit).  ``n`` is optional for
    formulas (default: largest atom) and required for the other forms except
    graphs, where edge ``id`` ``k`` is component ``k``.

Lifetime file
    A JSON object mapping each component id to a distribution::

        {"1": {"kind": "exponential", "rate": 1.0},
         "2": {"kind": "weibull", "shape": 2.0, "scale": 1.5},
         "3": {"kind": "empirical", "times": [0, 1, 3], "survival": [1, 0.4, 0]}}

Game file
    ``states`` (a count or a list of labels), ``transition`` (row-major
    matrix), ``horizon``, ``players``, ``payoff`` and ``cost`` (one row per
    player), ``aggregate`` (a system document over the players),
    ``initial_distribution`` and optional ``sense``.

Every schema violation raises :class:`InputError` naming the offending
field, e.g. ``system.formula.args[1].k``; JSON syntax errors report the line
and column.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

from .errors import InputError, RelimpError
from .lifetime import EmpiricalTable, Exponential, LifetimeModel, Weibull
from .reliability import ImportanceReport
from .structure import And, Atom, KOutOfN, Or, StructureFunction
from .voting import StoppingGame

SYSTEM_FORMS = ("formula", "minimal_paths", "truth_table", "graph")


def _fail(where: str, message: str):
    raise InputError(f"{where}: {message}")


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read file ({exc.strerror or exc})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        _fail(where, f"must be >= {minimum}, got {value}")
    return value


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(where, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        _fail(where, "must be finite")
    return float(value)


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        _fail(where, f"expected a list, got {type(value).__name__}")
    return value


def _obj(value, where: str) -> dict:
    if not isinstance(value, dict):
        _fail(where, f"expected an object, got {type(value).__name__}")
    return value


def _no_extra(doc: dict, allowed, where: str) -> None:
    extra = sorted(set(doc) - set(allowed))
    if extra:
        _fail(where, f"unexpected field(s) {', '.join(map(repr, extra))}")


def _matrix(value, where: str, rows: int, cols: int) -> list:
    value = _list(value, where)
    if len(value) != rows:
        _fail(where, f"expected {rows} rows, got {len(value)}")
    out = []
    for r, row in enumerate(value):
        row = _list(row, f"{where}[{r}]")
        if len(row) != cols:
            _fail(f"{where}[{r}]", f"expected {cols} entries, got {len(row)}")
        out.append([_number(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)])
    return out


# -- system documents --------------------------------------------------------


def _parse_formula(node, where: str):
    node = _obj(node, where)
    if "atom" in node:
        _no_extra(node, ("atom",), where)
        return Atom(_int(node["atom"], f"{where}.atom", 1))
    if "op" not in node:
        _fail(where, "formula node needs either 'atom' or 'op'")
    op = node["op"]
    if op not in ("and", "or", "kofn"):
        _fail(f"{where}.op", f"expected 'and', 'or' or 'kofn', got {op!r}")
    _no_extra(node, ("op", "args", "k") if op == "kofn" else ("op", "args"), where)
    args = _list(node.get("args"), f"{where}.args")
    if not args:
        _fail(f"{where}.args", "needs at least one argument")
    children = [_parse_formula(a, f"{where}.args[{j}]") for j, a in enumerate(args)]
    if op == "and":
        return And(*children)
    if op == "or":
        return Or(*children)
    k = _int(node.get("k"), f"{where}.k", 1)
    if k > len(children):
        _fail(f"{where}.k", f"must not exceed the {len(children)} arguments, got {k}")
    return KOutOfN(k, *children)


def parse_system(doc, where: str = "system") -> StructureFunction:
    """Structure function from a parsed system document."""
    doc = _obj(doc, where)
    forms = [f for f in SYSTEM_FORMS if f in doc]
    if len(forms) != 1:
        _fail(where, f"needs exactly one of {', '.join(SYSTEM_FORMS)}; found {forms or 'none'}")
    form = forms[0]
    _no_extra(doc, (form, "n", "name", "description"), where)
    n = _int(doc["n"], f"{where}.n", 1) if "n" in doc else None
    try:
        if form == "formula":
            return StructureFunction.from_formula(_parse_formula(doc["formula"], f"{where}.formula"), n)
        if n is None and form in ("minimal_paths", "truth_table"):
            _fail(f"{where}.n", f"required for the {form} form")
        if form == "minimal_paths":
            sets = _list(doc["minimal_paths"], f"{where}.minimal_paths")
            family = []
            for j, s in enumerate(sets):
                members = _list(s, f"{where}.minimal_paths[{j}]")
                family.append([_int(i, f"{where}.minimal_paths[{j}][{k}]", 1) for k, i in enumerate(members)])
            return StructureFunction.from_minimal_paths(n, family)
        if form == "truth_table":
            table = doc["truth_table"]
            if not isinstance(table, str):
                _fail(f"{where}.truth_table", "expected a string of '0'/'1' characters")
            if len(table) != 1 << n:
                _fail(f"{where}.truth_table", f"expected {1 << n} characters for n={n}, got {len(table)}")
            phi = StructureFunction.from_truth_table(table, n)
            if not phi.is_monotone():
                _fail(f"{where}.truth_table", "the table is not monotone")
            return phi
        return _parse_graph(doc["graph"], f"{where}.graph", n)
    except InputError as exc:
        if str(exc).startswith(where):
            raise
        raise InputError(f"{where}.{form}: {exc}") from None


def _parse_graph(doc, where: str, n: int | None) -> StructureFunction:
    doc = _obj(doc, where)
    _no_extra(doc, ("nodes", "edges", "source", "target"), where)
    for key in ("nodes", "edges", "source", "target"):
        if key not in doc:
            _fail(where, f"missing field {key!r}")
    nodes = _list(doc["nodes"], f"{where}.nodes")
    edges = _list(doc["edges"], f"{where}.edges")
    by_id = {}
    for j, e in enumerate(edges):
        e = _obj(e, f"{where}.edges[{j}]")
        _no_extra(e, ("id", "from", "to"), f"{where}.edges[{j}]")
        for key in ("id", "from", "to"):
            if key not in e:
                _fail(f"{where}.edges[{j}]", f"missing field {key!r}")
        eid = _int(e["id"], f"{where}.edges[{j}].id", 1)
        if eid in by_id:
            _fail(f"{where}.edges[{j}].id", f"duplicate edge id {eid}")
        by_id[eid] = (e["from"], e["to"])
    if sorted(by_id) != list(range(1, len(by_id) + 1)):
        _fail(f"{where}.edges", "edge ids must be exactly 1..(number of edges)")
    if n is not None and n != len(by_id):
        _fail(f"{where}", f"n={n} but the graph has {len(by_id)} edges")
    ordered = [by_id[k] for k in range(1, len(by_id) + 1)]
    return StructureFunction.from_two_terminal_graph(nodes, ordered, doc["source"], doc["target"])


def load_system(path) -> StructureFunction:
    return parse_system(read_json(path), where=str(path))


def _formula_doc(node) -> dict:
    if isinstance(node, Atom):
        return {"atom": node.index}
    args = [_formula_doc(c) for c in node.children]
    if isinstance(node, And):
        return {"op": "and", "args": args}
    if isinstance(node, Or):
        return {"op": "or", "args": args}
    return {"op": "kofn", "k": node.k, "args": args}


def system_document(phi: StructureFunction) -> dict:
    """JSON-ready document in the structure's native form.

    Composite structures are written as truth tables.
    """
    if phi.backend == "formula":
        return {"n": phi.n, "formula": _formula_doc(phi.formula)}
    if phi.backend == "paths":
        return {"n": phi.n, "minimal_paths": [sorted(s) for s in phi.minimal_paths()]}
    if phi.backend == "graph":
        g = phi.graph
        return {
            "graph": {
                "nodes": list(g.nodes),
                "edges": [{"id": k, "from": u, "to": v} for k, (u, v) in enumerate(g.edges, start=1)],
                "source": g.source,
                "target": g.target,
            }
        }
    return {"n": phi.n, "truth_table": "".join("1" if b else "0" for b in phi.truth_table())}


# -- lifetime documents ------------------------------------------------------

_DIST_FIELDS = {
    "exponential": ("rate",),
    "weibull": ("shape", "scale"),
    "empirical": ("times", "survival"),
}


def _parse_distribution(doc, where: str):
    doc = _obj(doc, where)
    kind = doc.get("kind")
    if kind not in _DIST_FIELDS:
        _fail(f"{where}.kind", f"expected one of {', '.join(_DIST_FIELDS)}, got {kind!r}")
    fields = _DIST_FIELDS[kind]
    _no_extra(doc, ("kind",) + fields, where)
    for key in fields:
        if key not in doc:
            _fail(where, f"missing field {key!r} for a {kind} distribution")
    try:
        if kind == "empirical":
            times = [_number(v, f"{where}.times[{j}]") for j, v in enumerate(_list(doc["times"], f"{where}.times"))]
            surv = [
                _number(v, f"{where}.survival[{j}]") for j, v in enumerate(_list(doc["survival"], f"{where}.survival"))
            ]
            return EmpiricalTable(times, surv)
        params = [_number(doc[key], f"{where}.{key}") for key in fields]
        return Exponential(*params) if kind == "exponential" else Weibull(*params)
    except InputError as exc:
        if str(exc).startswith(where):
            raise
        raise InputError(f"{where}: {exc}") from None


def parse_lifetimes(doc, n: int | None = None, where: str = "lifetimes") -> LifetimeModel:
    doc = _obj(doc, where)
    ids = {}
    for key in doc:
        try:
            ids[int(key)] = key
        except ValueError:
            _fail(where, f"component id {key!r} is not an integer")
    count = len(ids) if n is None else n
    expected = set(range(1, count + 1))
    if set(ids) != expected:
        missing = sorted(expected - set(ids))
        extra = sorted(set(ids) - expected)
        detail = []
        if missing:
            detail.append(f"missing components {missing}")
        if extra:
            detail.append(f"unknown components {extra}")
        _fail(where, "; ".join(detail))
    return LifetimeModel([_parse_distribution(doc[ids[i]], f"{where}.{ids[i]}") for i in range(1, count + 1)])


def load_lifetimes(path, n: int | None = None) -> LifetimeModel:
    return parse_lifetimes(read_json(path), n, where=str(path))


def lifetime_document(model: LifetimeModel) -> dict:
    out = {}
    for i, d in enumerate(model.components, start=1):
        if isinstance(d, Exponential):
            out[str(i)] = {"kind": "exponential", "rate": d.rate}
        elif isinstance(d, Weibull):
            out[str(i)] = {"kind": "weibull", "shape": d.shape, "scale": d.scale}
        else:
            out[str(i)] = {"kind": "empirical", "times": d.times.tolist(), "survival": d.survival_values.tolist()}
    return out


# -- game documents ----------------------------------------------------------

_GAME_FIELDS = (
    "states", "transition", "horizon", "players", "payoff", "cost", "aggregate", "initial_distribution", "sense",
    "name", "description",
)


def parse_game(doc, where: str = "game") -> StoppingGame:
    doc = _obj(doc, where)
    _no_extra(doc, _GAME_FIELDS, where)
    for key in _GAME_FIELDS[:8]:
        if key not in doc:
            _fail(where, f"missing field {key!r}")
    states = doc["states"]
    if isinstance(states, list):
        if not states:
            _fail(f"{where}.states", "needs at least one state")
        labels = tuple(states)
        m = len(labels)
    else:
        m = _int(states, f"{where}.states", 1)
        labels = None
    p = _int(doc["players"], f"{where}.players", 1)
    horizon = _int(doc["horizon"], f"{where}.horizon", 1)
    transition = _matrix(doc["transition"], f"{where}.transition", m, m)
    payoff = _matrix(doc["payoff"], f"{where}.payoff", p, m)
    cost = _matrix(doc["cost"], f"{where}.cost", p, m)
    q0 = _list(doc["initial_distribution"], f"{where}.initial_distribution")
    if len(q0) != m:
        _fail(f"{where}.initial_distribution", f"expected {m} entries, got {len(q0)}")
    q0 = [_number(v, f"{where}.initial_distribution[{j}]") for j, v in enumerate(q0)]
    aggregate = parse_system(doc["aggregate"], f"{where}.aggregate")
    sense = doc.get("sense", "minimize")
    try:
        return StoppingGame(transition, horizon, payoff, cost, aggregate, q0, sense, labels)
    except RelimpError as exc:
        raise type(exc)(f"{where}: {exc}") from None


def load_game(path) -> StoppingGame:
    return parse_game(read_json(path), where=str(path))


def game_document(game: StoppingGame) -> dict:
    return {
        "states": list(game.states) if game.states is not None else game.m,
        "transition": game.transition.tolist(),
        "horizon": game.horizon,
        "players": game.players,
        "payoff": game.payoff.tolist(),
        "cost": game.cost.tolist(),
        "aggregate": system_document(game.aggregate),
        "initial_distribution": game.initial_distribution.tolist(),
        "sense": game.sense,
    }


# -- output ------------------------------------------------------------------


def format_json(obj) -> str:
    """Deterministic JSON text with floats written to 17 significant digits.

    Keys keep insertion order; NaN and infinities become ``null``.
    """
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj + 0.0, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {format_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(format_json(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return format_json(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def format_decimal(value: float, digits: int = 6) -> str:
    """Round to ``digits`` decimal places and print the shortest decimal form."""
    value = float(value)
    if not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    return repr(round(value, digits) + 0.0)


def emit_report(report: ImportanceReport, fmt: str = "csv", digits: int = 6, labels=None) -> str:
    """Text for an importance report: CSV ``component,value`` or a JSON object.

    ``labels`` replaces the default component numbers ``1..n``.
    """
    labels = list(range(1, len(report) + 1)) if labels is None else list(labels)
    if fmt == "json":
        doc = {"measure": report.measure, "components": labels, "values": list(report.values)}
        if report.normalization is not None:
            doc["normalization"] = float(report.normalization)
        if report.meta:
            doc["meta"] = report.meta
        return format_json(doc) + "\n"
    lines = ["component,value"]
    lines += [f"{i},{format_decimal(v, digits)}" for i, v in zip(labels, report.values)]
    return "\n".join(lines) + "\n"


def emit_family(name: str, family, fmt: str = "csv") -> str:
    """Text for a set family: CSV rows ``set_index,member,member,...`` or JSON."""
    sets = [sorted(s) for s in family]
    if fmt == "json":
        return format_json({"family": name, "sets": sets}) + "\n"
    lines = ["set_index,members"]
    lines += [",".join(str(v) for v in [k, *s]) for k, s in enumerate(sets, start=1)]
    return "\n".join(lines) + "\n"


def emit_quantities(rows, fmt: str = "csv", digits: int = 6) -> str:
    """Named scalar results as CSV ``quantity,value`` or a JSON object."""
    rows = list(rows)
    if fmt == "json":
        return format_json(dict(rows)) + "\n"
    lines = ["quantity,value"]
    for name, value in rows:
        text = format_decimal(value, digits) if isinstance(value, float) else str(value).lower() if isinstance(value, bool) else str(value)
        lines.append(f"{name},{text}")
    return "\n".join(lines) + "\n"

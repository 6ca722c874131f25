"""Command-line interface: ``relimp <subcommand> [options]``.

Exit status is 0 on success, 1 for input problems (bad flags, unreadable or
malformed files, dimension mismatches) and 2 for computational failures
(enumeration cap, quadrature, missing pure equilibrium, normalization, or a
failed equilibrium verification).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .errors import ComputationError, RelimpError
from .lifetime import (
    birnbaum_lifetime,
    bp_instant,
    bp_interval_all,
    bp_total_all,
    system_density,
    system_survival,
)
from .modular import birnbaum_module_chain, bp_module_component, decompose
from .reliability import ImportanceReport, birnbaum_all, reliability
from .structural import banzhaf_all, birnbaum_structural_all, bp_structural_all, shapley_shubik_all
from .structure import DEFAULT_MAX_COMPONENTS, ENV_MAX_COMPONENTS
from .voting import simulate, solve, verify_equilibrium, vgi

STRUCTURAL_MEASURES = {
    "birnbaum": birnbaum_structural_all,
    "banzhaf": banzhaf_all,
    "barlow-proschan": bp_structural_all,
    "shapley-shubik": shapley_shubik_all,
}
LIFETIME_MEASURES = ("bp-total", "bp-interval", "bp-instant", "birnbaum", "survival", "density")

EPILOG = f"""\
CSV output columns:
  importance reports   component,value
  set families         set_index,members   (members follow as extra columns)
  scalar results       quantity,value

environment:
  {ENV_MAX_COMPONENTS}   largest number of components accepted by exhaustive
                          2^n algorithms (default {DEFAULT_MAX_COMPONENTS})

exit status: 0 success, 1 input error, 2 computational error
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    parts = [s for s in text.replace(",", " ").split() if s]
    if not parts:
        raise UsageError("empty probability list")
    try:
        return [float(s) for s in parts]
    except ValueError:
        raise UsageError(f"cannot parse probability list {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        values = [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"cannot parse component list {text!r}") from None
    if not values:
        raise UsageError("empty component list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="relimp",
        description="Importance measures for binary coherent systems.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--digits", type=int, default=6, help="decimal places in CSV output (default 6)")
    system = _Parser(add_help=False)
    system.add_argument("--system", required=True, metavar="FILE", help="system definition (JSON)")
    probs = _Parser(add_help=False)
    group = probs.add_mutually_exclusive_group()
    group.add_argument("--p", metavar="LIST", help="component reliabilities, comma separated")
    group.add_argument("--p-file", metavar="FILE", help="component reliabilities (JSON list or whitespace separated)")
    game = _Parser(add_help=False)
    game.add_argument("--game", required=True, metavar="FILE", help="stopping game definition (JSON)")
    game.add_argument("--trials", type=int, metavar="K", help="Monte Carlo trials for a simulation cross-check")
    game.add_argument("--seed", type=int, default=0, metavar="S", help="random seed (default 0)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    kw = dict(formatter_class=argparse.RawDescriptionHelpFormatter, epilog=EPILOG)
    sub.add_parser("paths", parents=[common, system], help="minimal path sets", **kw)
    sub.add_parser("cuts", parents=[common, system], help="minimal cut sets", **kw)
    sub.add_parser("reliability", parents=[common, system, probs], help="system reliability h(p)", **kw)
    sub.add_parser("birnbaum", parents=[common, system, probs], help="Birnbaum reliability importance", **kw)
    st = sub.add_parser("structural", parents=[common, system], help="structural importance / power indices", **kw)
    st.add_argument("--measure", required=True, help=f"one of: {', '.join(STRUCTURAL_MEASURES)}")
    lt = sub.add_parser("lifetime", parents=[common, system], help="lifetime importance measures", **kw)
    lt.add_argument("--lifetimes", required=True, metavar="FILE")
    lt.add_argument("--measure", default="bp-total", help=f"one of: {', '.join(LIFETIME_MEASURES)} (default bp-total)")
    lt.add_argument("--t", type=float, metavar="VALUE", help="time point or interval end")
    md = sub.add_parser("module", parents=[common, system, probs], help="importance of components inside a module", **kw)
    md.add_argument("--module", required=True, metavar="LIST", help="module components, comma separated")
    md.add_argument("--lifetimes", metavar="FILE", help="use Barlow-Proschan module importance")
    sub.add_parser("vgi", parents=[common, game], help="voting game importance", **kw)
    vf = sub.add_parser("verify", parents=[common, game], help="check the equilibrium against all deviations", **kw)
    vf.add_argument("--tolerance", type=float, default=1e-12, metavar="EPS")
    return parser


def _probabilities(args, n: int):
    if args.p is not None:
        return _float_list(args.p)
    if args.p_file is not None:
        path = Path(args.p_file)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"{path}: cannot read file ({exc.strerror or exc})") from None
        if text.lstrip().startswith("["):
            data = io.read_json(path)
            if not isinstance(data, list):
                raise UsageError(f"{path}: expected a JSON list of probabilities")
            return data
        return _float_list(text)
    raise UsageError("one of --p or --p-file is required")


def _need_t(args) -> float:
    if args.t is None:
        raise UsageError(f"--t is required for --measure {args.measure}")
    return args.t


def _run(args) -> tuple[str, int]:
    fmt, digits = args.format, args.digits
    if args.command in ("vgi", "verify"):
        game = io.load_game(args.game)
        sol = solve(game)
        if args.command == "vgi":
            vec = vgi(game, sol)
            return io.emit_report(vec.as_report(), fmt, digits), 0
        report = verify_equilibrium(game, sol)
        ok = report.max_violation <= args.tolerance and report.values_consistent
        rows = [
            ("max_violation", report.max_violation),
            ("worst_player", report.worst[0]),
            ("worst_state", report.worst[1]),
            ("deviations_checked", report.deviations_checked),
            ("values_consistent", report.values_consistent),
        ]
        for i, v in enumerate(sol.expected_values(game), start=1):
            rows.append((f"value_{i}", float(v)))
        if args.trials is not None:
            sim = simulate(game, sol, args.trials, args.seed)
            for i, (mu, se) in enumerate(zip(sim.mean, sim.stderr), start=1):
                rows.append((f"simulated_{i}", float(mu)))
                rows.append((f"stderr_{i}", float(se)))
        rows.append(("equilibrium", ok))
        return io.emit_quantities(rows, fmt, digits), 0 if ok else 2

    phi = io.load_system(args.system)
    if args.command == "paths":
        return io.emit_family("paths", phi.minimal_paths(), fmt), 0
    if args.command == "cuts":
        return io.emit_family("cuts", phi.minimal_cuts(), fmt), 0
    if args.command == "reliability":
        return io.emit_quantities([("reliability", reliability(phi, _probabilities(args, phi.n)))], fmt, digits), 0
    if args.command == "birnbaum":
        return io.emit_report(birnbaum_all(phi, _probabilities(args, phi.n)), fmt, digits), 0
    if args.command == "structural":
        measure = STRUCTURAL_MEASURES.get(args.measure)
        if measure is None:
            raise UsageError(f"--measure must be one of {', '.join(STRUCTURAL_MEASURES)}, got {args.measure!r}")
        return io.emit_report(measure(phi), fmt, digits), 0
    if args.command == "lifetime":
        if args.measure not in LIFETIME_MEASURES:
            raise UsageError(f"--measure must be one of {', '.join(LIFETIME_MEASURES)}, got {args.measure!r}")
        model = io.load_lifetimes(args.lifetimes, phi.n)
        if args.measure == "bp-total":
            return io.emit_report(bp_total_all(phi, model), fmt, digits), 0
        t = _need_t(args)
        if args.measure == "bp-interval":
            return io.emit_report(bp_interval_all(phi, model, t), fmt, digits), 0
        if args.measure == "survival":
            return io.emit_quantities([("t", t), ("survival", system_survival(phi, model, t))], fmt, digits), 0
        if args.measure == "density":
            return io.emit_quantities([("t", t), ("density", system_density(phi, model, t))], fmt, digits), 0
        fn = bp_instant if args.measure == "bp-instant" else birnbaum_lifetime
        values = [fn(phi, model, i, t) for i in range(1, phi.n + 1)]
        return io.emit_report(ImportanceReport(args.measure.replace("-", "_"), values, meta={"t": t}), fmt, digits), 0
    # module
    dec = decompose(phi, _int_list(args.module))
    if args.lifetimes is not None:
        if args.p is not None or args.p_file is not None:
            raise UsageError("give either --lifetimes or --p/--p-file, not both")
        model = io.load_lifetimes(args.lifetimes, phi.n)
        values = [bp_module_component(dec, model, i) for i in dec.module]
        measure = "bp_module"
    else:
        p = _probabilities(args, phi.n)
        values = [birnbaum_module_chain(dec, p, i) for i in dec.module]
        measure = "birnbaum_module"
    report = ImportanceReport(measure, values, meta={"module": list(dec.module)})
    return io.emit_report(report, fmt, digits, labels=dec.module), 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text, code = _run(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"relimp: computation failed: {exc}", file=sys.stderr)
        return 2
    except RelimpError as exc:
        print(f"relimp: input error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

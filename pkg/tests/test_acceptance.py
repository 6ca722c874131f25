"""Acceptance suite: one test per acceptance criterion.

Each test carries an ``acceptance`` marker; the terminal summary prints one
PASS/FAIL line per criterion (see ``conftest.py``).  Run with ``-s`` to also see
the detail lines as they are produced.
"""

import itertools
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from oracles import (
    all_rules,
    banzhaf_by_swings,
    brute_cuts,
    brute_paths,
    enum_reliability,
    minimal_family,
    random_path_family,
    random_structures,
    rule_values,
    shapley_by_permutations,
    works,
)
from relimp import data_path
from relimp.io import load_game, load_system
from relimp.lifetime import Exponential, LifetimeModel, Weibull, bp_total, integrate_failure_measure
from relimp.modular import _module_pivot, birnbaum_module_chain, bp_module, bp_module_all, bp_module_component, decompose
from relimp.reliability import _pinned, _reliability, birnbaum, birnbaum_all, reliability
from relimp.structural import (
    banzhaf,
    birnbaum_structural,
    birnbaum_structural_exact,
    bp_structural,
    bp_structural_exact,
    shapley_shubik,
    structural_functioning_failure,
)
from relimp.structure import compose, dual, from_minimal_paths, identity, parallel, series
from relimp.voting import StoppingGame, evaluate_profile, simulate, solve, verify_equilibrium, vgi

P3 = [0.95, 0.99, 0.96]
GOLDEN = Path(__file__).parent / "golden"
DESK = ["single_agent", "symmetric_pair", "asymmetric_desk", "three_maintainers"]

# minimal path sets and the printed cut table of the two-terminal graph, row by row
TABLE1 = [{1, 3, 8}, {1, 4, 7, 8}, {2, 5, 7, 8}, {2, 6, 9}]
TABLE2 = [
    {1, 2}, {1, 5, 6}, {1, 5, 9}, {1, 6, 7}, {1, 6, 8}, {1, 7, 9}, {2, 3, 4}, {2, 3, 7},
    {2, 8}, {3, 4, 5, 6}, {3, 4, 5, 9}, {3, 6, 7}, {3, 7, 9}, {6, 8}, {8, 9},
]


def detail(record_property, text):
    record_property("detail", text)
    print(text)


def canonical(family):
    return sorted((tuple(sorted(s)) for s in family), key=lambda t: (len(t), t))


@pytest.mark.acceptance(1, "series example: reliability and Birnbaum vector")
def test_criterion_01_series(record_property):
    phi = series(3)
    h = reliability(phi, P3)
    b = birnbaum_all(phi, P3).as_array()
    assert abs(h - 0.90288) <= 1e-12
    np.testing.assert_allclose(b, [0.9504, 0.912, 0.9405], rtol=0, atol=1e-12)
    detail(record_property, f"h = {h:.15g}, B = ({', '.join(f'{v:.15g}' for v in b)})")


@pytest.mark.acceptance(2, "parallel example: reliability and Birnbaum vector")
def test_criterion_02_parallel(record_property):
    phi = parallel(3)
    h = reliability(phi, P3)
    b = birnbaum_all(phi, P3).as_array()
    assert abs(h - 0.99998) <= 1e-12
    np.testing.assert_allclose(b, [0.0004, 0.002, 0.0005], rtol=0, atol=1e-12)
    detail(record_property, f"h = {h:.15g}, B = ({', '.join(f'{v:.15g}' for v in b)})")


@pytest.mark.acceptance(3, "series/parallel block structural importance, exact")
def test_criterion_03_block_structure(record_property):
    phi = load_system(data_path("systems", "birstruct.json"))
    exact = [birnbaum_structural_exact(phi, i) for i in range(1, 6)]
    assert exact == [Fraction(7, 16)] * 2 + [Fraction(1, 16)] * 3
    assert [birnbaum_structural(phi, i) for i in range(1, 6)] == [0.4375] * 2 + [0.0625] * 3
    detail(record_property, "series 7/16 = 0.4375, parallel 1/16 = 0.0625")


@pytest.mark.acceptance(4, "two-terminal graph: minimal paths and minimal cuts")
def test_criterion_04_graph(record_property):
    phi = load_system(data_path("systems", "gab.json"))
    n = phi.n
    assert n == 9
    paths = canonical(phi.minimal_paths())
    cuts = canonical(phi.minimal_cuts())
    # paths: exactly the printed table, and the exhaustive oracle agrees
    assert paths == canonical(TABLE1)
    assert canonical(brute_paths(TABLE1, n)) == paths
    # cuts: exhaustive enumeration is authoritative
    oracle = canonical(brute_cuts(TABLE1, n))
    assert cuts == oracle
    assert len(cuts) == 14
    # every printed row is a cut set, but one row contains another printed row
    for row in TABLE2:
        assert not works(TABLE1, set(range(1, n + 1)) - row)
    assert canonical(minimal_family(TABLE2)) == cuts
    redundant = [r for r in TABLE2 if any(o < r for o in TABLE2)]
    assert redundant == [{1, 6, 8}]
    detail(
        record_property,
        "4 paths match the table; the oracle finds 14 minimal cuts: the printed table lists 15 rows but "
        "{1,6,8} contains {6,8}, so it is a cut and not minimal; the product bound of 14 is correct",
    )


@pytest.mark.acceptance(5, "identity suite on 200 random coherent structures")
def test_criterion_05_identities(record_property):
    rng = np.random.default_rng(500)
    count = 0
    for n, fam in random_structures(seed=5, count=200, n_max=6):
        phi = from_minimal_paths(n, fam)
        phi_d = dual(phi)
        swings = banzhaf_by_swings(fam, n)
        shapley = shapley_by_permutations(fam, n)
        total = 0.0
        for i in range(1, n + 1):
            assert abs(banzhaf(phi, i) - birnbaum_structural(phi, i)) <= 1e-12
            assert abs(shapley_shubik(phi, i) - bp_structural(phi, i)) <= 1e-12
            assert birnbaum_structural_exact(phi, i) == swings[i - 1]
            assert bp_structural_exact(phi, i) == shapley[i - 1]
            split = structural_functioning_failure(phi, i)
            assert abs(split.functioning - split.failure) <= 1e-12
            assert abs(split.total - birnbaum_structural(phi, i)) <= 1e-12
            assert abs(birnbaum_structural(phi_d, i) - birnbaum_structural(phi, i)) <= 1e-12
            assert abs(bp_structural(phi_d, i) - bp_structural(phi, i)) <= 1e-12
            total += shapley_shubik(phi, i)
        assert abs(total - 1.0) <= 1e-12
        p = rng.uniform(size=n)
        assert abs(reliability(phi_d, 1 - p) - (1 - reliability(phi, p))) <= 1e-12
        count += 1
    assert count == 200
    detail(record_property, f"{count} structures, all identities within 1e-12 and equal to swing/permutation oracles")


@pytest.mark.acceptance(6, "reliability against full weighted enumeration")
def test_criterion_06_reliability_oracle(record_property):
    rng = np.random.default_rng(600)
    worst = 0.0
    sizes = []
    for n, fam in random_structures(seed=6, count=50, n_max=12):
        p = rng.uniform(size=n)
        err = abs(reliability(from_minimal_paths(n, fam), p) - enum_reliability(fam, n, p))
        worst = max(worst, err)
        sizes.append(n)
    assert worst <= 1e-12
    detail(record_property, f"50 systems, n up to {max(sizes)}, max error {worst:.1e}")


def _random_model(rng, n):
    dists = []
    for _ in range(n):
        if rng.uniform() < 0.5:
            dists.append(Exponential(float(rng.uniform(0.3, 3.0))))
        else:
            dists.append(Weibull(float(rng.uniform(0.7, 3.0)), float(rng.uniform(0.5, 2.0))))
    return LifetimeModel(dists)


@pytest.mark.acceptance(7, "lifetime importance sums to one; iid case equals structural")
def test_criterion_07_lifetime_normalization(record_property):
    rng = np.random.default_rng(700)
    worst_sum = worst_iid = 0.0
    for n, fam in random_structures(seed=7, count=20, n_max=5):
        phi = from_minimal_paths(n, fam)
        model = _random_model(rng, n)
        values = [bp_total(phi, model, i) for i in range(1, n + 1)]
        worst_sum = max(worst_sum, abs(sum(values) - 1.0))
        iid = LifetimeModel.iid(_random_model(rng, 1).components[0], n)
        for i in range(1, n + 1):
            worst_iid = max(worst_iid, abs(bp_total(phi, iid, i) - bp_structural(phi, i)))
    assert worst_sum <= 1e-6
    assert worst_iid <= 1e-6
    detail(record_property, f"20 systems: max |sum - 1| {worst_sum:.1e}, max iid deviation {worst_iid:.1e}")


@pytest.mark.acceptance(8, "series of two exponentials: closed-form lifetime importance")
def test_criterion_08_closed_form(record_property):
    grid = [0.1, 0.5, 1.0, 2.0, 7.5]
    worst = 0.0
    for l1, l2 in itertools.product(grid, repeat=2):
        model = LifetimeModel([Exponential(l1), Exponential(l2)])
        worst = max(worst, abs(bp_total(series(2), model, 1) - l1 / (l1 + l2)))
    assert worst <= 1e-8
    detail(record_property, f"{len(grid) ** 2} rate pairs, max error {worst:.1e}")


@pytest.mark.acceptance(9, "module suite: decomposition, chain rule, additivity, non-factorization")
def test_criterion_09_modules(record_property):
    rng = np.random.default_rng(900)
    worst_chain = worst_flat = worst_sum = 0.0
    for _ in range(12):
        n_outer, n_inner = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        outer = from_minimal_paths(n_outer, random_path_family(rng, n_outer))
        inner = from_minimal_paths(n_inner, random_path_family(rng, n_inner))
        position = int(rng.integers(1, n_outer + 1))
        phi = compose(outer, position, inner)
        module = list(range(position, position + n_inner))
        dec = decompose(phi, module)
        # decomposition identity on every state
        for x in itertools.product((0, 1), repeat=phi.n):
            y = dec.module_structure.evaluate([x[i - 1] for i in dec.module])
            assert dec.organizer.evaluate([y if k == 0 else x[k - 1] for k in dec.outer_components]) == phi.evaluate(x)
        p = rng.uniform(size=phi.n)
        for i in module:
            worst_chain = max(worst_chain, abs(birnbaum_module_chain(dec, p, i) - birnbaum(phi, p, i)))
        model = _random_model(rng, phi.n)
        flat = [bp_total(phi, model, i) for i in module]
        values = bp_module_all(dec, model).as_array()
        worst_flat = max(worst_flat, float(np.max(np.abs(values - flat))))
        worst_sum = max(worst_sum, abs(bp_module(dec, model) - sum(flat)))
    assert worst_chain <= 1e-12
    assert worst_flat <= 1e-6 and worst_sum <= 1e-6

    # the integral of a product of pivot probabilities is not the product of integrals
    phi = compose(series(2), 1, parallel(2))
    dec = decompose(phi, [1, 2])
    model = LifetimeModel.iid(Exponential(1.0), 3)
    k = dec.module_index(1)

    def module_pivot(q):
        return _module_pivot(dec, dec.split(q)[1])

    def inner_pivot(q):
        inner = dec.split(q)[0]
        chi = dec.module_structure
        return _reliability(chi, _pinned(inner, k, 1.0)) - _reliability(chi, _pinned(inner, k, 0.0))

    joint = bp_module_component(dec, model, 1)
    separate = integrate_failure_measure(model, 1, np.inf, module_pivot) * integrate_failure_measure(
        model, 1, np.inf, inner_pivot
    )
    assert abs(joint - 1 / 6) <= 1e-9 and abs(separate - 1 / 4) <= 1e-9
    detail(
        record_property,
        f"chain rule {worst_chain:.1e}, flat equality {worst_flat:.1e}, additivity {worst_sum:.1e}; "
        f"counterexample: joint {joint:.6f} vs factored {separate:.6f}",
    )


@pytest.mark.acceptance(10, "voting game: reduction, symmetry, verification, simulation")
def test_criterion_10_voting(record_property):
    # one player: the solver's rule is optimal among all Markov stop rules
    rng = np.random.default_rng(1000)
    for _ in range(15):
        m, N = int(rng.integers(1, 4)), int(rng.integers(1, 5))
        P = rng.uniform(size=(m, m)) ** 2
        P /= P.sum(axis=1, keepdims=True)
        q0 = rng.uniform(size=m)
        game = StoppingGame(P, N, rng.uniform(1, 10, size=(1, m)), rng.uniform(0, 2, size=(1, m)), identity(),
                            q0 / q0.sum())
        sol = solve(game)
        args = (game.transition.tolist(), game.payoff[0].tolist(), game.cost[0].tolist(), N)
        best = np.min([rule_values(*args, rule) for rule in all_rules(m, N)], axis=0)
        ours = rule_values(*args, sol.decisions[:, :, 0].tolist())
        assert list(ours) == list(best)
        np.testing.assert_allclose(sol.values[0, 0], best, rtol=0, atol=1e-12)

    # symmetric pair
    sym = load_game(data_path("games", "symmetric_pair.json"))
    sym_vgi = vgi(sym).values
    assert max(abs(v - 0.5) for v in sym_vgi) <= 1e-12

    # verification on every shipped instance, and an injected deviation is caught
    checked = 0
    for name in DESK:
        game = load_game(data_path("games", f"{name}.json"))
        report = verify_equilibrium(game, solve(game))
        assert report.values_consistent and report.max_violation == 0.0
        checked += report.deviations_checked
    desk = load_game(data_path("games", "asymmetric_desk.json"))
    sol = solve(desk)
    bad = sol.decisions.copy()
    bad[0, 0, :] = 0
    injected = type(sol)(bad, evaluate_profile(desk, bad), desk.aggregate.truth_table()[(bad * [1, 2]).sum(axis=-1)])
    caught = verify_equilibrium(desk, injected)
    assert caught.max_violation > 1.0 and not caught.ok()

    # Monte Carlo cross-check
    sim = simulate(desk, sol, 100_000, seed=2024)
    target = sol.expected_values(desk)
    z = np.abs(sim.mean - target) / sim.stderr
    assert np.all(z <= 3.0)
    detail(
        record_property,
        f"15 one-player games optimal; symmetric VGI {tuple(sym_vgi)}; {checked} deviations checked with zero "
        f"violation; injected deviation gain {caught.max_violation:.3f}; simulation |z| max {z.max():.2f}",
    )


def _cli(*args):
    proc = subprocess.run([sys.executable, "-m", "relimp", *args], capture_output=True, check=False)
    assert proc.returncode == 0, proc.stderr.decode()
    return proc.stdout


@pytest.mark.acceptance(11, "command line: deterministic output and golden tables")
def test_criterion_11_cli(record_property):
    gab = str(data_path("systems", "gab.json"))
    runs = [
        ("paths", "--system", gab),
        ("cuts", "--system", gab, "--format", "json"),
        ("structural", "--system", gab, "--measure", "shapley-shubik", "--format", "json"),
        ("verify", "--game", str(data_path("games", "three_maintainers.json")), "--trials", "5000", "--seed", "17"),
        ("vgi", "--game", str(data_path("games", "asymmetric_desk.json")), "--format", "json"),
    ]
    for argv in runs:
        assert _cli(*argv) == _cli(*argv)
    assert _cli("paths", "--system", gab) == (GOLDEN / "gab_paths.csv").read_bytes()
    assert _cli("cuts", "--system", gab) == (GOLDEN / "gab_cuts.csv").read_bytes()
    detail(record_property, f"{len(runs)} commands byte-identical across runs; path and cut tables match golden files")

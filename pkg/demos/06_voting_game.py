"""
Voting game importance
======================

Two maintainers watch a Markov chain and vote, at each step, whether to stop
and repair.  An aggregation rule (here: stop if either votes to stop) turns the
votes into a decision.  Backward induction yields a Nash equilibrium of the
multilateral stopping game; each player's share of the expected total defines
its voting game importance.
"""

from relimp import data_path, simulate, solve, verify_equilibrium, vgi
from relimp.io import load_game

game = load_game(data_path("games", "asymmetric_desk.json"))
solution = solve(game)

for n in range(1, game.horizon):
    for x in range(game.m):
        votes = solution.decisions[n - 1, x].tolist()
        print(f"stage {n}, state {x}: votes {votes} -> {'stop' if solution.stops[n - 1, x] else 'continue'}")

print("expected values:", solution.expected_values(game).round(6).tolist())
print("voting game importance:", [round(v, 6) for v in vgi(game, solution).values])

# Check every unilateral Markov deviation, then cross-check by simulation.
report = verify_equilibrium(game, solution)
print(f"{report.deviations_checked} deviations checked, largest gain {report.max_violation}")
sim = simulate(game, solution, 100_000, seed=1)
print("simulated means:", sim.mean.round(4).tolist(), "+/-", sim.stderr.round(4).tolist())

# With identical players the importance splits evenly.
print("symmetric pair:", vgi(load_game(data_path("games", "symmetric_pair.json"))).values)

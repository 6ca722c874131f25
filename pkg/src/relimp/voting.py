"""Voting game importance from a multilateral stopping game.

Each of ``p`` players looks after one component and watches a finite
Markov chain with states ``0..m-1``.  At every stage ``n = 1..N-1`` each
player declares whether they want to stop.  The declarations are combined
by a monotone aggregation rule ``delta`` (a structure function over the
players); the chain stops at the first stage where ``delta`` of the
declarations is 1, and at stage ``N`` at the latest.

Stopping in state ``x`` pays player ``i`` the amount ``f_i(x)``.  Every step
the chain moves on from state ``x`` adds ``c_i(x)`` to player ``i``'s total.
The first observed state ``X_1`` is drawn from the initial distribution.
Under the default ``"minimize"`` sense the totals are costs.

The game is solved by backward induction.  With ``v_i^(N)(x) = f_i(x)`` and
continuation ``w_i(x) = c_i(x) + sum_y P(x, y) v_i^(n+1)(y)``, the stage game
at ``(n, x)`` lets each player pick a bit; the outcome for player ``i`` is
``f_i(x)`` if ``delta`` of the bits is 1 and ``w_i(x)`` otherwise.  All
``2^p`` profiles are enumerated; among the pure Nash profiles the one with
the best total (smallest for ``minimize``) is kept, ties going to the
lexicographically smallest bit vector (continue before stop).  A stage game
without a pure Nash profile raises :class:`EquilibriumError`.

The voting game importance of player ``i`` is ``E_{Q0}[v_i^(1)]`` divided
by the sum of these expectations over all players.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, EquilibriumError, InputError, NormalizationError
from .reliability import ImportanceReport
from .structure import StructureFunction

MAX_PLAYERS = 12
MAX_DEVIATION_BITS = 20
SENSES = ("minimize", "maximize")


def _readonly(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StoppingGame:
    """Finite-horizon multilateral stopping game on a Markov chain.

    ``payoff[i, x]`` and ``cost[i, x]`` are indexed by player (0-based row)
    and state.  ``aggregate`` is a structure function whose components are
    the players.
    """

    transition: np.ndarray
    horizon: int
    payoff: np.ndarray
    cost: np.ndarray
    aggregate: StructureFunction
    initial_distribution: np.ndarray
    sense: str = "minimize"
    states: tuple | None = None

    def __post_init__(self):
        P = _readonly(self.transition)
        f = _readonly(self.payoff)
        c = _readonly(self.cost)
        q0 = _readonly(self.initial_distribution)
        object.__setattr__(self, "transition", P)
        object.__setattr__(self, "payoff", f)
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "initial_distribution", q0)
        if P.ndim != 2 or P.shape[0] != P.shape[1] or P.shape[0] == 0:
            raise InputError(f"transition must be a square matrix, got shape {P.shape}")
        m = P.shape[0]
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > 1e-12):
            raise InputError("transition rows must be nonnegative and sum to 1")
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise InputError(f"horizon must be an integer >= 1, got {self.horizon!r}")
        object.__setattr__(self, "horizon", int(self.horizon))
        if f.ndim != 2 or f.shape[1] != m:
            raise InputError(f"payoff must have shape (players, {m}), got {f.shape}")
        if c.shape != f.shape:
            raise InputError(f"cost must have the payoff shape {f.shape}, got {c.shape}")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(c))):
            raise InputError("payoff and cost must be finite")
        p = f.shape[0]
        if p < 1:
            raise InputError("the game needs at least one player")
        if self.aggregate.n != p:
            raise InputError(f"aggregation rule has {self.aggregate.n} inputs, game has {p} players")
        if p > MAX_PLAYERS:
            raise CapacityError(f"stage games are enumerated exhaustively; {p} players exceeds {MAX_PLAYERS}")
        if not self.aggregate.is_semicoherent():
            raise InputError("aggregation rule must be monotone with delta(0)=0 and delta(1)=1")
        if q0.shape != (m,) or np.any(q0 < 0) or abs(q0.sum() - 1.0) > 1e-12:
            raise InputError("initial distribution must be a probability vector over the states")
        if self.sense not in SENSES:
            raise InputError(f"sense must be one of {SENSES}, got {self.sense!r}")
        if self.states is not None:
            labels = tuple(self.states)
            if len(labels) != m:
                raise InputError(f"{len(labels)} state labels for {m} states")
            object.__setattr__(self, "states", labels)

    @property
    def players(self) -> int:
        return self.payoff.shape[0]

    @property
    def m(self) -> int:
        return self.transition.shape[0]

    def better_or_equal(self, a, b):
        """Elementwise: is ``a`` at least as good as ``b`` for the player concerned."""
        return a <= b if self.sense == "minimize" else a >= b

    def scaled(self, factor: float) -> "StoppingGame":
        return StoppingGame(
            self.transition, self.horizon, self.payoff * factor, self.cost * factor, self.aggregate,
            self.initial_distribution, self.sense, self.states,
        )


@dataclass(frozen=True)
class EquilibriumSolution:
    """Backward-induction equilibrium.

    ``decisions[n-1, x, i]`` is player ``i+1``'s declaration at stage ``n``
    (``1 <= n <= N-1``) in state ``x``; at stage ``N`` the chain is stopped
    regardless.  ``values[n-1, i, x]`` is ``v_{i+1}^(n)(x)``.
    """

    decisions: np.ndarray
    values: np.ndarray
    stops: np.ndarray  # stops[n-1, x] = delta(decisions[n-1, x])

    def value(self, stage: int, player: int, state: int) -> float:
        return float(self.values[stage - 1, player - 1, state])

    def expected_values(self, game: StoppingGame) -> np.ndarray:
        """``E_{Q0}[v_i^(1)(X)]`` per player."""
        return self.values[0] @ game.initial_distribution


def _player_bits(p: int) -> np.ndarray:
    profiles = np.arange(1 << p, dtype=np.int64)
    return ((profiles[:, None] >> np.arange(p)) & 1).astype(np.int8)


def _stage_equilibrium(game: StoppingGame, stop_val, cont_val, delta_tab, flip_tab, bits, stage, state):
    stops = delta_tab[:, None]
    outcome = np.where(stops, stop_val, cont_val)  # (2^p, p)
    alternative = np.where(flip_tab, stop_val, cont_val)  # player i flips their own bit
    nash = np.all(game.better_or_equal(outcome, alternative), axis=1)
    candidates = np.flatnonzero(nash)
    if candidates.size == 0:
        raise EquilibriumError(f"no pure Nash profile at stage {stage}, state {state}", stage=stage, state=state)
    totals = outcome[candidates].sum(axis=1)
    best = totals.min() if game.sense == "minimize" else totals.max()
    tied = candidates[totals == best]
    chosen = min(tied, key=lambda s: tuple(bits[s]))
    return chosen, outcome[chosen]


def solve(game: StoppingGame) -> EquilibriumSolution:
    """Equilibrium of the stopping game by backward induction."""
    N, m, p = game.horizon, game.m, game.players
    delta_tab = game.aggregate.truth_table()
    profiles = np.arange(1 << p, dtype=np.int64)
    flip_tab = delta_tab[profiles[:, None] ^ (1 << np.arange(p))[None, :]]
    bits = _player_bits(p)

    values = np.empty((N, p, m))
    values[N - 1] = game.payoff
    decisions = np.zeros((N - 1, m, p), dtype=np.int8)
    stops = np.zeros((N - 1, m), dtype=bool)
    for n in range(N - 1, 0, -1):
        cont = game.cost + values[n] @ game.transition.T
        for x in range(m):
            chosen, outcome = _stage_equilibrium(
                game, game.payoff[:, x], cont[:, x], delta_tab, flip_tab, bits, n, x
            )
            decisions[n - 1, x] = bits[chosen]
            stops[n - 1, x] = delta_tab[chosen]
            values[n - 1, :, x] = outcome
    for a in (values, decisions, stops):
        a.setflags(write=False)
    return EquilibriumSolution(decisions, values, stops)


def _profile_masks(decisions: np.ndarray) -> np.ndarray:
    p = decisions.shape[-1]
    return (decisions.astype(np.int64) << np.arange(p)).sum(axis=-1)


def evaluate_profile(game: StoppingGame, decisions: np.ndarray) -> np.ndarray:
    """Values ``(N, p, m)`` of an arbitrary Markov declaration profile."""
    decisions = np.asarray(decisions)
    N, m, p = game.horizon, game.m, game.players
    if decisions.shape != (N - 1, m, p):
        raise InputError(f"decisions must have shape {(N - 1, m, p)}, got {decisions.shape}")
    stops = game.aggregate.truth_table()[_profile_masks(decisions)] if N > 1 else np.zeros((0, m), bool)
    values = np.empty((N, p, m))
    values[N - 1] = game.payoff
    for n in range(N - 1, 0, -1):
        cont = game.cost + values[n] @ game.transition.T
        values[n - 1] = np.where(stops[n - 1][None, :], game.payoff, cont)
    return values


@dataclass(frozen=True)
class VgiVector:
    values: tuple
    expected_totals: tuple
    normalization: str = "sum"

    def __getitem__(self, i: int) -> float:
        return self.values[i - 1]

    def __len__(self) -> int:
        return len(self.values)

    def as_report(self) -> ImportanceReport:
        total = float(sum(self.expected_totals))
        return ImportanceReport("vgi", self.values, normalization=total, meta={"expected_totals": list(self.expected_totals)})


def vgi(game: StoppingGame, solution: EquilibriumSolution | None = None, normalization: str = "sum") -> VgiVector:
    """Voting game importance of the players.

    ``normalization="sum"`` divides each player's expected equilibrium total
    by the sum over players and requires all expectations to share one sign.
    ``normalization="l1"`` divides by the sum of absolute values instead.
    """
    sol = solve(game) if solution is None else solution
    raw = sol.expected_values(game)
    if normalization == "sum":
        if np.any(raw > 0) and np.any(raw < 0):
            raise NormalizationError("player expectations have mixed signs", raw=raw.tolist())
        denom = raw.sum()
    elif normalization == "l1":
        denom = np.abs(raw).sum()
    else:
        raise InputError(f"unknown normalization {normalization!r}")
    if denom == 0:
        raise NormalizationError("player expectations sum to zero", raw=raw.tolist())
    return VgiVector(tuple(float(v) for v in raw / denom), tuple(float(v) for v in raw), normalization)


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of :func:`verify_equilibrium`.

    ``violations[i, x]`` is how much player ``i+1`` starting in state ``x``
    gains by the best Markov deviation (positive means the profile is not an
    equilibrium).
    """

    violations: np.ndarray
    max_violation: float
    worst: tuple  # (player, state) with the largest violation, 1-based player
    deviations_checked: int
    values_consistent: bool

    def ok(self, tolerance: float = 1e-12) -> bool:
        return self.max_violation <= tolerance and self.values_consistent


def verify_equilibrium(
    game: StoppingGame, solution: EquilibriumSolution, chunk: int = 1 << 14
) -> EquilibriumReport:
    """Check the equilibrium inequality against every Markov deviation.

    For each player all ``2^(m (N-1))`` individual stopping rules are tried
    with the other players' declarations fixed.  Values of the profile
    itself are recomputed from the declarations rather than taken from the
    solution.
    """
    N, m, p = game.horizon, game.m, game.players
    width = m * (N - 1)
    if width > MAX_DEVIATION_BITS:
        raise CapacityError(f"deviation space 2^{width} exceeds 2^{MAX_DEVIATION_BITS}")
    decisions = np.asarray(solution.decisions)
    own = evaluate_profile(game, decisions)
    consistent = solution.values.shape == own.shape and bool(np.allclose(solution.values, own, rtol=0, atol=1e-12))
    delta_tab = game.aggregate.truth_table()
    masks = _profile_masks(decisions) if N > 1 else np.zeros((0, m), np.int64)
    total = 1 << width
    violations = np.empty((p, m))
    for i in range(p):
        bit = 1 << i
        stop_if_declare = delta_tab[masks | bit]  # (N-1, m)
        stop_if_not = delta_tab[masks & ~bit]
        best = None
        for start in range(0, total, chunk):
            devs = np.arange(start, min(start + chunk, total), dtype=np.int64)
            V = np.broadcast_to(game.payoff[i], (devs.size, m)).copy()
            for n in range(N - 1, 0, -1):
                shift = (n - 1) * m + np.arange(m)
                declare = ((devs[:, None] >> shift[None, :]) & 1).astype(bool)
                stop = np.where(declare, stop_if_declare[n - 1], stop_if_not[n - 1])
                V = np.where(stop, game.payoff[i], game.cost[i] + V @ game.transition.T)
            block = V.min(axis=0) if game.sense == "minimize" else V.max(axis=0)
            if best is None:
                best = block
            else:
                best = np.minimum(best, block) if game.sense == "minimize" else np.maximum(best, block)
        gain = own[0, i] - best if game.sense == "minimize" else best - own[0, i]
        violations[i] = gain
    flat = int(np.argmax(violations))
    worst = (flat // m + 1, flat % m)
    violations.setflags(write=False)
    return EquilibriumReport(violations, float(violations.max()), worst, total, consistent)


@dataclass(frozen=True)
class SimulationResult:
    mean: np.ndarray
    stderr: np.ndarray
    trials: int
    longest: int  # largest stopping stage observed
    stop_counts: np.ndarray = field(repr=False)  # stop_counts[n-1] trials stopped at stage n


def simulate(game: StoppingGame, solution: EquilibriumSolution, trials: int, seed: int | None = 0) -> SimulationResult:
    """Monte Carlo rollout of the chain under the equilibrium declarations.

    Random numbers come from ``numpy.random.default_rng(seed)``: one uniform
    per trial picks the initial state, then one uniform per trial per stage
    ``1..N-1`` picks the next state (drawn for every trial, used only by
    those still running).  The mapping from seed to trajectories is
    therefore fixed for a given game shape.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    N, m, p = game.horizon, game.m, game.players
    cum = np.cumsum(game.transition, axis=1)
    cum[:, -1] = 1.0
    cum0 = np.cumsum(game.initial_distribution)
    cum0[-1] = 1.0
    x = np.searchsorted(cum0, rng.random(trials), side="right")
    totals = np.zeros((trials, p))
    running = np.ones(trials, dtype=bool)
    stop_counts = np.zeros(N, dtype=np.int64)
    for n in range(1, N):
        u = rng.random(trials)
        halt = running & solution.stops[n - 1, x]
        totals[halt] += game.payoff[:, x[halt]].T
        stop_counts[n - 1] = np.count_nonzero(halt)
        running &= ~halt
        totals[running] += game.cost[:, x[running]].T
        nxt = (u[:, None] >= cum[x]).sum(axis=1)
        x = np.where(running, nxt, x)
    totals[running] += game.payoff[:, x[running]].T
    stop_counts[N - 1] = np.count_nonzero(running)
    mean = totals.mean(axis=0)
    stderr = totals.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros(p)
    longest = int(np.flatnonzero(stop_counts).max()) + 1
    return SimulationResult(mean, stderr, trials, longest, stop_counts)

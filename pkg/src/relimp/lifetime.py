"""Component lifetimes, system survival and lifetime importance measures.

Each component ``i`` has a lifetime distribution with failure CDF ``F_i``,
survival ``Q_i = 1 - F_i`` and density ``f_i``.  The system survival is the
reliability polynomial evaluated at the component survivals,
``Q(t) = h(Q_1(t), ..., Q_n(t))``.

The Barlow-Proschan importance of component ``i`` is the probability that
its failure is the one that brings the system down:

    I(i) = int_0^inf [h(1_i, Q(t)) - h(0_i, Q(t))] dF_i(t)

The integrals are evaluated after the substitution ``u = F_i(t)``, which
maps ``[0, inf)`` onto ``[0, 1]`` and leaves a bounded integrand, so no
tail truncation is needed.  Every distribution here has an exact inverse CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from .errors import DimensionError, InputError, QuadratureError
from .reliability import ImportanceReport, _pinned, _reliability
from .structure import StructureFunction

QUAD_ABS_TOL = 1e-9
QUAD_HARD_FLOOR = 1e-6


class Exponential:
    def __init__(self, rate: float):
        if not rate > 0 or not math.isfinite(rate):
            raise InputError(f"exponential rate must be positive, got {rate!r}")
        self.rate = float(rate)

    def cdf(self, t):
        return -np.expm1(-self.rate * np.asarray(t, dtype=float))

    def survival(self, t):
        return np.exp(-self.rate * np.asarray(t, dtype=float))

    def density(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, self.rate * np.exp(-self.rate * t), 0.0)

    def ppf(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.rate

    def breakpoints(self) -> tuple:
        return ()

    def __repr__(self):
        return f"Exponential(rate={self.rate!r})"


class Weibull:
    """Weibull lifetime with ``F(t) = 1 - exp(-(t / scale)^shape)``."""

    def __init__(self, shape: float, scale: float):
        for name, value in (("shape", shape), ("scale", scale)):
            if not value > 0 or not math.isfinite(value):
                raise InputError(f"Weibull {name} must be positive, got {value!r}")
        self.shape = float(shape)
        self.scale = float(scale)

    def cdf(self, t):
        z = np.maximum(np.asarray(t, dtype=float), 0.0) / self.scale
        return -np.expm1(-(z ** self.shape))

    def survival(self, t):
        z = np.maximum(np.asarray(t, dtype=float), 0.0) / self.scale
        return np.exp(-(z ** self.shape))

    def density(self, t):
        t = np.asarray(t, dtype=float)
        z = np.maximum(t, 0.0) / self.scale
        with np.errstate(divide="ignore", invalid="ignore"):
            dens = (self.shape / self.scale) * z ** (self.shape - 1) * np.exp(-(z ** self.shape))
        return np.where(t >= 0, dens, 0.0)

    def ppf(self, u):
        return self.scale * (-np.log1p(-np.asarray(u, dtype=float))) ** (1.0 / self.shape)

    def breakpoints(self) -> tuple:
        return ()

    def __repr__(self):
        return f"Weibull(shape={self.shape!r}, scale={self.scale!r})"


class EmpiricalTable:
    """Piecewise-linear survival curve through tabulated points.

    ``times`` must start at 0 and increase strictly; ``survival`` must start
    at 1, decrease strictly and end at 0.  The density is piecewise constant
    and undefined at interior knots and at the last knot.
    """

    def __init__(self, times: Sequence[float], survival: Sequence[float]):
        t = np.asarray(times, dtype=float)
        s = np.asarray(survival, dtype=float)
        if t.ndim != 1 or t.shape != s.shape or t.size < 2:
            raise InputError("empirical table needs matching times and survival lists of length >= 2")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise InputError("empirical times must start at 0 and be strictly increasing")
        if s[0] != 1.0 or s[-1] != 0.0 or np.any(np.diff(s) >= 0):
            raise InputError("empirical survival must fall strictly from 1 to 0")
        self.times = t
        self.survival_values = s

    def survival(self, t):
        return np.interp(np.asarray(t, dtype=float), self.times, self.survival_values, left=1.0, right=0.0)

    def cdf(self, t):
        return 1.0 - self.survival(t)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        interior = self.times[1:]
        if np.any(np.isin(t, interior)):
            raise InputError("empirical survival is not differentiable at a table knot")
        slopes = -np.diff(self.survival_values) / np.diff(self.times)
        idx = np.searchsorted(self.times, t, side="right") - 1
        inside = (t >= 0) & (t < self.times[-1])
        return np.where(inside, slopes[np.clip(idx, 0, slopes.size - 1)], 0.0)

    def ppf(self, u):
        # survival is strictly decreasing, so the CDF inverts by linear interpolation
        return np.interp(np.asarray(u, dtype=float), 1.0 - self.survival_values, self.times)

    def breakpoints(self) -> tuple:
        return tuple(self.times[1:-1])

    def __repr__(self):
        return f"EmpiricalTable(times={self.times.tolist()!r}, survival={self.survival_values.tolist()!r})"


Distribution = Exponential | Weibull | EmpiricalTable


@dataclass(frozen=True)
class LifetimeModel:
    """Independent lifetime distributions, ``components[i-1]`` for component ``i``."""

    components: tuple

    def __init__(self, components):
        object.__setattr__(self, "components", tuple(components))
        if not self.components:
            raise InputError("a lifetime model needs at least one component")

    @classmethod
    def iid(cls, dist, n: int) -> "LifetimeModel":
        return cls([dist] * n)

    @property
    def n(self) -> int:
        return len(self.components)

    def survival(self, t: float) -> np.ndarray:
        return np.array([float(d.survival(t)) for d in self.components])

    def cdf(self, t: float) -> np.ndarray:
        return np.array([float(d.cdf(t)) for d in self.components])

    def density(self, t: float) -> np.ndarray:
        return np.array([float(d.density(t)) for d in self.components])


def _check(phi: StructureFunction, model: LifetimeModel) -> None:
    if model.n != phi.n:
        raise DimensionError(f"lifetime model has {model.n} components, structure has {phi.n}")


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0:
        raise InputError(f"time must be nonnegative, got {t!r}")
    return t


def _birnbaum_at(phi: StructureFunction, q: np.ndarray, i: int) -> float:
    return _reliability(phi, _pinned(q, i, 1.0)) - _reliability(phi, _pinned(q, i, 0.0))


def system_survival(phi: StructureFunction, model: LifetimeModel, t: float) -> float:
    """``Q(t) = h(Q_1(t), ..., Q_n(t))``."""
    _check(phi, model)
    return _reliability(phi, model.survival(_check_time(t)))


def system_density(phi: StructureFunction, model: LifetimeModel, t: float) -> float:
    """``f(t) = -Q'(t) = sum_k I_h(k; Q(t)) f_k(t)``."""
    _check(phi, model)
    t = _check_time(t)
    q = model.survival(t)
    dens = model.density(t)
    return float(sum(_birnbaum_at(phi, q, k) * dens[k - 1] for k in range(1, phi.n + 1)))


def birnbaum_lifetime(phi: StructureFunction, model: LifetimeModel, i: int, t: float) -> float:
    """Time-dependent Birnbaum importance ``h(1_i, Q(t)) - h(0_i, Q(t))``."""
    _check(phi, model)
    i = phi._check_component(i)
    return _birnbaum_at(phi, model.survival(_check_time(t)), i)


def bp_instant(phi: StructureFunction, model: LifetimeModel, i: int, t: float) -> float:
    """Probability that component ``i`` caused a system failure observed at time ``t``."""
    _check(phi, model)
    i = phi._check_component(i)
    t = _check_time(t)
    q = model.survival(t)
    dens = model.density(t)
    rates = np.array([_birnbaum_at(phi, q, k) * dens[k - 1] for k in range(1, phi.n + 1)])
    total = rates.sum()
    if not total > 0:
        raise InputError(f"no system failure density at t={t}")
    return float(rates[i - 1] / total)


def integrate_failure_measure(model: LifetimeModel, i: int, upper: float, weight) -> float:
    """``int_0^upper weight(Q(u)) dF_i(u)`` via the substitution ``v = F_i(u)``.

    ``weight`` receives the vector of component survivals at time ``u``.
    """
    dist = model.components[i - 1]
    top = 1.0 if math.isinf(upper) else float(dist.cdf(upper))
    if top <= 0.0:
        return 0.0

    def integrand(v):
        return weight(model.survival(float(dist.ppf(v))))

    knots = [float(dist.cdf(b)) for d in model.components for b in d.breakpoints()]
    knots = sorted({k for k in knots if 0.0 < k < top})
    value, err = integrate.quad(integrand, 0.0, top, epsabs=QUAD_ABS_TOL, epsrel=0.0, limit=500, points=knots or None)
    if not err <= QUAD_HARD_FLOOR:
        raise QuadratureError(
            f"quadrature for component {i} reached only {err:.3g} absolute error", estimate=value, error=err
        )
    return float(value)


def _caused_by(phi: StructureFunction, model: LifetimeModel, i: int, upper: float) -> float:
    return integrate_failure_measure(model, i, upper, lambda q: _birnbaum_at(phi, q, i))


def bp_total(phi: StructureFunction, model: LifetimeModel, i: int) -> float:
    """Barlow-Proschan importance: probability that component ``i`` causes system failure."""
    _check(phi, model)
    i = phi._check_component(i)
    return _caused_by(phi, model, i, math.inf)


def bp_total_all(phi: StructureFunction, model: LifetimeModel) -> ImportanceReport:
    _check(phi, model)
    values = [_caused_by(phi, model, i, math.inf) for i in range(1, phi.n + 1)]
    return ImportanceReport("bp_total", values, normalization=float(sum(values)))


def bp_interval_all(phi: StructureFunction, model: LifetimeModel, t: float) -> ImportanceReport:
    """Probability that each component caused the system failure, given failure in ``[0, t]``."""
    _check(phi, model)
    t = float(t)
    if not t > 0:
        raise InputError(f"interval end must be positive, got {t!r}")
    raw = [_caused_by(phi, model, k, t) for k in range(1, phi.n + 1)]
    total = sum(raw)
    if not total > 0:
        raise InputError(f"the system cannot fail in [0, {t}]")
    return ImportanceReport("bp_interval", [r / total for r in raw], normalization=total, meta={"t": t})


def bp_interval(phi: StructureFunction, model: LifetimeModel, i: int, t: float) -> float:
    i = phi._check_component(i)
    return bp_interval_all(phi, model, t)[i]

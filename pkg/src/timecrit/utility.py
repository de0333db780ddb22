"""Time-dependent utility: curve families, utility models, expected utility.

A utility model assigns one curve u(action, hypothesis_state, t) per cell of
its action x state table; t is a non-negative number of minutes measuring how
long the pathological process has been running when the action takes effect.
Named control contexts can overlay individual cells to describe how the
system behaves by default while corrective action is pending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, Union

from .errors import InputError

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .bayes import Posterior

_SUM_TOL = 1e-9


# ---------------------------------------------------------------------------
# Finite discrete distributions over non-negative times
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeDistribution:
    """Finite distribution over non-negative times (minutes).

    ``support`` is a sorted tuple of (time, weight) atoms with distinct times,
    positive weights, and total weight 1 within 1e-9.  The same representation
    serves process-duration beliefs, uncertain deadlines, and travel times.
    """

    support: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.support:
            raise InputError("time distribution needs at least one atom")
        times = [t for t, _ in self.support]
        if any(t < 0 for t in times):
            raise InputError("time distribution has a negative time atom")
        if sorted(times) != times or len(set(times)) != len(times):
            raise InputError("time atoms must be distinct and sorted ascending")
        if any(w <= 0 for _, w in self.support):
            raise InputError("time distribution weights must be positive")
        total = math.fsum(w for _, w in self.support)
        if abs(total - 1.0) > _SUM_TOL:
            raise InputError(f"time distribution weights sum to {total!r}, not 1")

    @classmethod
    def point_mass(cls, t: float) -> "TimeDistribution":
        return cls(((float(t), 1.0),))

    @classmethod
    def of(cls, atoms: Mapping[float, float] | Iterable[tuple[float, float]]) -> "TimeDistribution":
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        return cls(tuple(sorted((float(t), float(w)) for t, w in items)))

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.support)

    def mean(self) -> float:
        return math.fsum(t * w for t, w in self.support)

    def shift(self, offset: float) -> "TimeDistribution":
        """Distribution of (atom + offset); offset must keep times >= 0."""
        return TimeDistribution(tuple((t + offset, w) for t, w in self.support))


def convolve(a: TimeDistribution, b: TimeDistribution) -> TimeDistribution:
    """Distribution of the sum of two independent time distributions.

    Atoms whose total times coincide are merged; total weight stays 1 within
    round-off.
    """
    acc: dict[float, float] = {}
    for ta, wa in a.support:
        for tb, wb in b.support:
            t = ta + tb
            acc[t] = acc.get(t, 0.0) + wa * wb
    return TimeDistribution(tuple(sorted(acc.items())))


# ---------------------------------------------------------------------------
# Prototypical cost-of-time curves
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Time-independent utility."""

    value: float


@dataclass(frozen=True)
class LinearUrgency:
    """Value decays linearly from ``start`` at rate ``slope`` down to ``floor``."""

    start: float
    slope: float
    floor: float

    def __post_init__(self):
        if self.slope > 0:
            raise InputError("linear_urgency slope must be <= 0")


@dataclass(frozen=True)
class ExponentialUrgency:
    """``amplitude * exp(-rate * t) + offset``; non-increasing in t."""

    amplitude: float
    rate: float
    offset: float = 0.0

    def __post_init__(self):
        if self.rate < 0:
            raise InputError("exponential_urgency rate must be >= 0")
        if self.amplitude < 0:
            raise InputError("exponential_urgency amplitude must be >= 0")


@dataclass(frozen=True)
class HardDeadline:
    """``pre`` before the deadline, ``post`` from the deadline on.

    The post value applies at t == deadline exactly: a deadline reached is a
    deadline missed.
    """

    pre: float
    post: float
    deadline: float

    def __post_init__(self):
        if self.pre < self.post:
            raise InputError("hard_deadline pre value must be >= post value")
        if self.deadline < 0:
            raise InputError("hard_deadline deadline must be >= 0")


@dataclass(frozen=True)
class UncertainDeadline:
    """Hard deadline whose time is known only as a distribution."""

    pre: float
    post: float
    deadline: TimeDistribution

    def __post_init__(self):
        if self.pre < self.post:
            raise InputError("uncertain_deadline pre value must be >= post value")


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through (t, value) knots; flat beyond the ends."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.knots:
            raise InputError("piecewise_linear needs at least one knot")
        times = [t for t, _ in self.knots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InputError("piecewise_linear knot times must be strictly increasing")
        if any(t < 0 for t in times):
            raise InputError("piecewise_linear knot times must be >= 0")


UtilityCurve = Union[
    Constant,
    LinearUrgency,
    ExponentialUrgency,
    HardDeadline,
    UncertainDeadline,
    PiecewiseLinear,
]


def eval_curve(curve: UtilityCurve, t: float) -> float:
    """Evaluate a curve at time t >= 0 (closed form, no sampling)."""
    if t < 0:
        raise InputError(f"curve evaluation time must be >= 0, got {t!r}")
    if isinstance(curve, Constant):
        return curve.value
    if isinstance(curve, LinearUrgency):
        return max(curve.start + curve.slope * t, curve.floor)
    if isinstance(curve, ExponentialUrgency):
        return curve.amplitude * math.exp(-curve.rate * t) + curve.offset
    if isinstance(curve, HardDeadline):
        return curve.pre if t < curve.deadline else curve.post
    if isinstance(curve, UncertainDeadline):
        return math.fsum(
            w * (curve.pre if t < d else curve.post) for d, w in curve.deadline.support
        )
    if isinstance(curve, PiecewiseLinear):
        knots = curve.knots
        if t <= knots[0][0]:
            return knots[0][1]
        if t >= knots[-1][0]:
            return knots[-1][1]
        for (t0, v0), (t1, v1) in zip(knots, knots[1:]):
            if t0 <= t <= t1:
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    raise InputError(f"unknown curve type {type(curve).__name__}")


# ---------------------------------------------------------------------------
# Utility models over (action, hypothesis state) with context overlays
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UtilityModel:
    """One curve per (action, hypothesis state), plus optional named overlays.

    ``actions`` and ``hypothesis_states`` are ordered; declaration order is
    the tie-breaking order everywhere downstream.  ``contexts`` maps an
    overlay name to replacement curves for a subset of cells.
    """

    actions: tuple[str, ...]
    hypothesis_states: tuple[str, ...]
    curves: Mapping[tuple[str, str], UtilityCurve]
    contexts: Mapping[str, Mapping[tuple[str, str], UtilityCurve]] = field(
        default_factory=dict
    )

    def __post_init__(self):
        if len(set(self.actions)) != len(self.actions):
            raise InputError("duplicate action names")
        if len(set(self.hypothesis_states)) != len(self.hypothesis_states):
            raise InputError("duplicate hypothesis state names")
        cells = {(a, s) for a in self.actions for s in self.hypothesis_states}
        missing = cells - set(self.curves)
        if missing:
            raise InputError(f"utility table is missing cells: {sorted(missing)}")
        extra = set(self.curves) - cells
        if extra:
            raise InputError(f"utility table has unknown cells: {sorted(extra)}")
        for name, overlay in self.contexts.items():
            bad = set(overlay) - cells
            if bad:
                raise InputError(
                    f"context {name!r} overrides unknown cells: {sorted(bad)}"
                )

    def curve(self, action: str, state: str, context: str | None = None) -> UtilityCurve:
        if action not in self.actions:
            raise InputError(f"unknown action {action!r}")
        if state not in self.hypothesis_states:
            raise InputError(f"unknown hypothesis state {state!r}")
        if context is not None:
            if context not in self.contexts:
                raise InputError(f"unknown control context {context!r}")
            overlay = self.contexts[context]
            if (action, state) in overlay:
                return overlay[(action, state)]
        return self.curves[(action, state)]


def eval_utility(
    model: UtilityModel,
    action: str,
    state: str,
    t: float,
    context: str | None = None,
) -> float:
    """u(action, state, t) under the base table or an overlay context."""
    return eval_curve(model.curve(action, state, context), t)


def _weighted_eu(
    posterior: "Posterior",
    model: UtilityModel,
    action: str,
    times: float | Sequence[float],
    context: str | None = None,
) -> float:
    """Posterior-weighted utility; ``times`` may vary per hypothesis state.

    Single accumulation path shared by expected_utility and the local
    treatment tradeoff, so equal per-state times give bit-identical sums.
    """
    if tuple(posterior.states) != model.hypothesis_states:
        raise InputError(
            "posterior states do not match the utility model's hypothesis states: "
            f"{posterior.states!r} vs {model.hypothesis_states!r}"
        )
    if isinstance(times, (int, float)):
        times = [float(times)] * len(model.hypothesis_states)
    elif len(times) != len(model.hypothesis_states):
        raise InputError("one evaluation time per hypothesis state required")
    total = 0.0
    for weight, state, t in zip(posterior.weights, model.hypothesis_states, times):
        total += weight * eval_utility(model, action, state, t, context)
    return total


def expected_utility(
    posterior: "Posterior",
    model: UtilityModel,
    action: str,
    t: float,
    context: str | None = None,
) -> float:
    """Sum over hypothesis states of p(state) * u(action, state, t)."""
    return _weighted_eu(posterior, model, action, t, context)

"""The delay-cost calculus over a fixed diagnosis posterior.

All operations compare expected utilities of acting at different process
durations while holding the posterior fixed: the question is never "what
will we believe later" but "what does waiting cost us, given what we
believe now".  Everything is a pure function of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Union

from .bayes import Posterior
from .errors import InputError
from .utility import TimeDistribution, UtilityModel, _weighted_eu

DEFAULT_CRITICALITY_STEP = 0.1


@dataclass(frozen=True)
class DecisionProblem:
    """A posterior over hypothesis states plus the utilities of acting on it.

    ``reference_time`` is the moment immediate action would take effect,
    measured on the same clock as the utility curves.
    """

    posterior: Posterior
    model: UtilityModel
    context: str | None = None
    reference_time: float = 0.0

    def __post_init__(self):
        if self.reference_time < 0:
            raise InputError("reference time must be >= 0")
        if tuple(self.posterior.states) != self.model.hypothesis_states:
            raise InputError(
                "posterior states do not match the utility model's hypothesis states"
            )


def best_action(dp: DecisionProblem, t: float) -> tuple[str, float]:
    """Highest expected-utility action at time t; earliest declared wins ties."""
    if not dp.model.actions:
        raise InputError("utility model declares no actions")
    if t < 0:
        raise InputError(f"evaluation time must be >= 0, got {t!r}")
    choice, best_eu = None, -math.inf
    for action in dp.model.actions:
        eu = _weighted_eu(dp.posterior, dp.model, action, t, dp.context)
        if eu > best_eu:
            choice, best_eu = action, eu
    return choice, best_eu


def _best_eu(dp: DecisionProblem, t: float) -> float:
    return best_action(dp, t)[1]


def ecda(dp: DecisionProblem, t: float) -> float:
    """Expected cost of delaying ideal action from the reference time to t.

    Both maximizations use the same posterior; only the action time moves.
    """
    if t < dp.reference_time:
        raise InputError(
            f"delayed time {t!r} precedes reference time {dp.reference_time!r}"
        )
    return _best_eu(dp, dp.reference_time) - _best_eu(dp, t)


def comprehensive_ecda(dp: DecisionProblem, onset: TimeDistribution) -> float:
    """Loss already incurred between process onset and acting right now.

    ``onset`` is the belief over how long the process has been running at
    the moment of immediate action; the baseline is acting at duration zero.
    """
    return math.fsum(
        w * (_best_eu(dp, 0.0) - _best_eu(dp, d)) for d, w in onset.support
    )


def ecda_with_duration_uncertainty(
    dp: DecisionProblem, onset: TimeDistribution, delay: float
) -> float:
    """Cost of an extra ``delay`` minutes when the elapsed duration is uncertain.

    For each elapsed duration d, compares acting at d against acting at
    d + delay, weighted by the onset belief.
    """
    if delay < 0:
        raise InputError(f"delay must be >= 0, got {delay!r}")
    return math.fsum(
        w * (_best_eu(dp, d) - _best_eu(dp, d + delay)) for d, w in onset.support
    )


# ---------------------------------------------------------------------------
# Misdiagnosis: the delayed action is drawn from a predictor, not optimal
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointMassPredictor:
    """The delayed decision maker will certainly take one known action."""

    action: str


@dataclass(frozen=True)
class UniformPredictor:
    """No information about the delayed decision: all actions equally likely."""


@dataclass(frozen=True)
class SoftmaxPredictor:
    """Delayed actions weighted by exp(EU / temperature); near-optimal as
    temperature -> 0, indifferent as temperature -> infinity."""

    temperature: float

    def __post_init__(self):
        if self.temperature <= 0:
            raise InputError("softmax temperature must be > 0")


ActionPredictor = Union[PointMassPredictor, UniformPredictor, SoftmaxPredictor]


def action_distribution(
    predictor: ActionPredictor, dp: DecisionProblem, t: float
) -> tuple[float, ...]:
    """Probability per model action (declaration order) at evaluation time t."""
    actions = dp.model.actions
    if not actions:
        raise InputError("utility model declares no actions")
    if isinstance(predictor, PointMassPredictor):
        if predictor.action not in actions:
            raise InputError(f"unknown action {predictor.action!r}")
        return tuple(1.0 if a == predictor.action else 0.0 for a in actions)
    if isinstance(predictor, UniformPredictor):
        return tuple(1.0 / len(actions) for _ in actions)
    if isinstance(predictor, SoftmaxPredictor):
        eus = [
            _weighted_eu(dp.posterior, dp.model, a, t, dp.context) for a in actions
        ]
        top = max(eus)
        raw = [math.exp((eu - top) / predictor.temperature) for eu in eus]
        norm = math.fsum(raw)
        return tuple(r / norm for r in raw)
    raise InputError(f"unknown predictor type {type(predictor).__name__}")


def ecdm(dp: DecisionProblem, predictor: ActionPredictor, t: float) -> float:
    """Expected cost of delay and misdiagnosis.

    Like ecda, but the delayed action follows the predictor's distribution
    instead of the maximizer, so ecdm >= ecda always.
    """
    if t < dp.reference_time:
        raise InputError(
            f"delayed time {t!r} precedes reference time {dp.reference_time!r}"
        )
    probs = action_distribution(predictor, dp, t)
    delayed = math.fsum(
        p * _weighted_eu(dp.posterior, dp.model, action, t, dp.context)
        for p, action in zip(probs, dp.model.actions)
    )
    return _best_eu(dp, dp.reference_time) - delayed


def criticality(
    dp: DecisionProblem, t: float, h: float = DEFAULT_CRITICALITY_STEP
) -> float:
    """Rate (utility per minute) at which the best action's value is falling.

    Forward difference over [t, t + h], so a deadline step lands in the
    interval ahead of t.
    """
    if t < 0:
        raise InputError(f"evaluation time must be >= 0, got {t!r}")
    if h <= 0:
        raise InputError(f"criticality step must be > 0, got {h!r}")
    return (_best_eu(dp, t) - _best_eu(dp, t + h)) / h


def ecda_transport(dp: DecisionProblem, travel: TimeDistribution) -> float:
    """Expected delay cost under an uncertain arrival time.

    The travel distribution's atoms are absolute action times on the decision
    problem's clock; each is compared to immediate action at the reference
    time and weighted by its probability.
    """
    return math.fsum(
        w * (_best_eu(dp, dp.reference_time) - _best_eu(dp, t))
        for t, w in travel.support
    )


# ---------------------------------------------------------------------------
# Local treatment versus load-and-go
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeRemoved:
    """Equivalent process time a local treatment removes for one hypothesis.

    ``constant`` removes a fixed number of minutes; ``proportional`` removes
    a fraction of the duration elapsed when treatment is applied.
    """

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("constant", "proportional"):
            raise InputError(f"unknown time-removed kind {self.kind!r}")
        if self.kind == "constant" and self.value < 0:
            raise InputError("constant time removed must be >= 0 minutes")
        if self.kind == "proportional" and not (0.0 <= self.value <= 1.0):
            raise InputError("proportional time removed must lie in [0, 1]")

    def at(self, elapsed: float) -> float:
        return self.value if self.kind == "constant" else self.value * elapsed


@dataclass(frozen=True)
class TreatmentOption:
    """A local stabilization: time bought per hypothesis, at an admin cost."""

    name: str
    admin_time: float
    removed: Mapping[str, TimeRemoved] = field(default_factory=dict)

    def __post_init__(self):
        if self.admin_time < 0:
            raise InputError("treatment administration time must be >= 0")


@dataclass(frozen=True)
class LoadAndGoReport:
    ecda_load_and_go: float
    ecda_with_treatment: float
    recommendation: str  # "load_and_go" | "treat_locally"


def evaluate_load_and_go(
    dp: DecisionProblem, treatment: TreatmentOption, t: float
) -> LoadAndGoReport:
    """Compare transporting immediately against treating on site first.

    Treating shifts each hypothesis's effective duration to
    t - removed(state, t) + admin_time, clamped at the reference time:
    treatment cannot rewind a process past its onset.  Ties go to
    load-and-go.
    """
    if t < dp.reference_time:
        raise InputError(
            f"delayed time {t!r} precedes reference time {dp.reference_time!r}"
        )
    go_cost = ecda(dp, t)

    zero = TimeRemoved("constant", 0.0)
    times = [
        max(t - treatment.removed.get(state, zero).at(t) + treatment.admin_time,
            dp.reference_time)
        for state in dp.model.hypothesis_states
    ]
    treated_eu = -math.inf
    for action in dp.model.actions:
        eu = _weighted_eu(dp.posterior, dp.model, action, times, dp.context)
        if eu > treated_eu:
            treated_eu = eu
    treat_cost = _best_eu(dp, dp.reference_time) - treated_eu

    recommendation = "treat_locally" if treat_cost < go_cost else "load_and_go"
    return LoadAndGoReport(go_cost, treat_cost, recommendation)

"""Multi-patient transport planning: scenarios, plan enumeration, ranking.

A plan assigns every patient to one trip of one asset and to a facility.
Assets carry a single patient per trip and drive directly from each
drop-off to the next pickup; arrival times accumulate by convolving the
independent leg distributions.  Each patient's cost is the expected cost of
delaying their ideal action until facility arrival, and a plan's cost is
the sum over patients.  Enumeration is exhaustive with hard bounds, so the
minimum is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import fsum
from typing import Iterator, Mapping

from .decisions import DecisionProblem, ecda_transport
from .errors import (
    EnumerationLimitError,
    InfeasibleScenarioError,
    InputError,
    NotFoundError,
)
from .utility import TimeDistribution, convolve

MAX_PATIENTS = 6
MAX_ASSETS = 3
MAX_FACILITIES = 3


@dataclass(frozen=True)
class TransportModel:
    """Travel-time distributions keyed by (origin, destination, time band)."""

    table: Mapping[tuple[str, str, str], TimeDistribution]

    def lookup(self, origin: str, destination: str, band: str) -> TimeDistribution:
        key = (origin, destination, band)
        if key in self.table:
            return self.table[key]
        if origin == destination:
            # Staying put costs nothing unless the model says otherwise.
            return TimeDistribution.point_mass(0.0)
        raise NotFoundError(
            f"no travel time declared for {key!r}", path=f"transport.{origin}->{destination}@{band}"
        )


def travel_time(model: TransportModel, origin: str, destination: str, band: str) -> TimeDistribution:
    return model.lookup(origin, destination, band)


@dataclass(frozen=True)
class PatientCase:
    """One patient: where they are, what we believe, what acting is worth."""

    id: str
    location: str
    problem: DecisionProblem
    onset: TimeDistribution = field(
        default_factory=lambda: TimeDistribution.point_mass(0.0)
    )
    required_tags: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "required_tags", frozenset(self.required_tags))


@dataclass(frozen=True)
class Asset:
    id: str
    location: str


@dataclass(frozen=True)
class Facility:
    id: str
    location: str
    tags: frozenset[str] = frozenset()
    capacity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "tags", frozenset(self.tags))
        if self.capacity < 0:
            raise InputError(f"facility {self.id!r} capacity must be >= 0")


@dataclass(frozen=True)
class Scenario:
    patients: tuple[PatientCase, ...]
    assets: tuple[Asset, ...]
    facilities: tuple[Facility, ...]
    transport: TransportModel
    clock: float = 0.0
    band: str = "default"

    def __post_init__(self):
        for group, label in ((self.patients, "patient"), (self.assets, "asset"),
                             (self.facilities, "facility")):
            ids = [item.id for item in group]
            if len(set(ids)) != len(ids):
                raise InputError(f"duplicate {label} ids")
        if self.clock < 0:
            raise InputError("scenario clock must be >= 0")


@dataclass(frozen=True)
class TransportPlan:
    """Ordered (patient, facility) trips per asset id."""

    trips: Mapping[str, tuple[tuple[str, str], ...]]

    def assignments(self) -> dict[str, str]:
        """patient id -> facility id over all assets."""
        out: dict[str, str] = {}
        for legs in self.trips.values():
            for patient, facility in legs:
                out[patient] = facility
        return out


@dataclass(frozen=True)
class PlanEvaluation:
    plan: TransportPlan
    per_patient: Mapping[str, float]
    arrivals: Mapping[str, TimeDistribution]
    total: float


def _check_bounds(scenario: Scenario) -> None:
    if not scenario.patients:
        raise InputError("planning needs at least one patient")
    if (
        len(scenario.patients) > MAX_PATIENTS
        or len(scenario.assets) > MAX_ASSETS
        or len(scenario.facilities) > MAX_FACILITIES
    ):
        raise EnumerationLimitError(
            "scenario exceeds the exhaustive-search bounds "
            f"({MAX_PATIENTS} patients, {MAX_ASSETS} assets, {MAX_FACILITIES} "
            "facilities); split it into independent sub-scenarios"
        )
    if not scenario.assets:
        raise InputError("planning needs at least one asset")
    if not scenario.facilities:
        raise InputError("planning needs at least one facility")


def _iter_plans(scenario: Scenario) -> Iterator[TransportPlan]:
    patients = scenario.patients
    assets = scenario.assets
    facilities = scenario.facilities
    n = len(patients)

    eligible: list[list[int]] = []
    for p in patients:
        ok = [i for i, f in enumerate(facilities) if p.required_tags <= f.tags]
        eligible.append(ok)

    for asset_choice in itertools.product(range(len(assets)), repeat=n):
        groups: list[list[int]] = [[] for _ in assets]
        for patient_idx, asset_idx in enumerate(asset_choice):
            groups[asset_idx].append(patient_idx)
        for ordering in itertools.product(
            *(itertools.permutations(group) for group in groups)
        ):
            for facility_choice in itertools.product(*(eligible[i] for i in range(n))):
                counts = [0] * len(facilities)
                for f_idx in facility_choice:
                    counts[f_idx] += 1
                if any(c > f.capacity for c, f in zip(counts, facilities)):
                    continue
                trips = {
                    asset.id: tuple(
                        (patients[i].id, facilities[facility_choice[i]].id)
                        for i in ordering[a_idx]
                    )
                    for a_idx, asset in enumerate(assets)
                }
                yield TransportPlan(trips)


def enumerate_plans(scenario: Scenario) -> list[TransportPlan]:
    """All feasible plans, in a deterministic lexicographic order."""
    _check_bounds(scenario)
    return list(_iter_plans(scenario))


def evaluate_plan(scenario: Scenario, plan: TransportPlan) -> PlanEvaluation:
    """Arrival-time distributions and expected delay cost for one plan."""
    patients = {p.id: p for p in scenario.patients}
    facilities = {f.id: f for f in scenario.facilities}
    assets = {a.id: a for a in scenario.assets}

    seen: list[str] = []
    counts: dict[str, int] = {}
    for asset_id, legs in plan.trips.items():
        if asset_id not in assets:
            raise InputError(f"plan references unknown asset {asset_id!r}")
        for patient_id, facility_id in legs:
            if patient_id not in patients:
                raise InputError(f"plan references unknown patient {patient_id!r}")
            if facility_id not in facilities:
                raise InputError(f"plan references unknown facility {facility_id!r}")
            seen.append(patient_id)
            counts[facility_id] = counts.get(facility_id, 0) + 1
    if sorted(seen) != sorted(patients):
        raise InputError("plan must assign every patient exactly once")
    for facility_id, used in counts.items():
        if used > facilities[facility_id].capacity:
            raise InputError(
                f"facility {facility_id!r} capacity {facilities[facility_id].capacity} "
                f"exceeded with {used} patients"
            )

    band = scenario.band
    arrivals: dict[str, TimeDistribution] = {}
    for asset_id, legs in plan.trips.items():
        elapsed = TimeDistribution.point_mass(scenario.clock)
        location = assets[asset_id].location
        for patient_id, facility_id in legs:
            patient = patients[patient_id]
            facility = facilities[facility_id]
            pickup = scenario.transport.lookup(location, patient.location, band)
            delivery = scenario.transport.lookup(
                patient.location, facility.location, band
            )
            elapsed = convolve(convolve(elapsed, pickup), delivery)
            arrivals[patient_id] = elapsed
            location = facility.location

    per_patient = {
        p.id: ecda_transport(p.problem, arrivals[p.id]) for p in scenario.patients
    }
    total = fsum(per_patient.values())
    return PlanEvaluation(plan, per_patient, arrivals, total)


def best_plan(scenario: Scenario) -> PlanEvaluation:
    """Minimum total-cost plan; enumeration order breaks ties."""
    _check_bounds(scenario)
    best: PlanEvaluation | None = None
    for plan in _iter_plans(scenario):
        evaluation = evaluate_plan(scenario, plan)
        if best is None or evaluation.total < best.total:
            best = evaluation
    if best is None:
        raise InfeasibleScenarioError(
            "no feasible transport plan exists for this scenario"
        )
    return best

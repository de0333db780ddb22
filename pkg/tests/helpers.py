"""Generators and independent oracles shared across test modules.

Oracles here deliberately avoid the library's own computation paths:
random network posteriors are checked against brute enumeration, plan
costs against direct float arithmetic over curve evaluations.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np

from timecrit import (
    Asset,
    BayesNet,
    Constant,
    DecisionProblem,
    Evidence,
    ExponentialUrgency,
    Facility,
    Finding,
    HardDeadline,
    LinearUrgency,
    PatientCase,
    PiecewiseLinear,
    Posterior,
    Scenario,
    TimeDistribution,
    TransportModel,
    UncertainDeadline,
    UtilityModel,
    Variable,
    eval_curve,
)


def random_net(rng: random.Random, max_vars: int = 12) -> tuple[BayesNet, Evidence]:
    """Random binary DAG with strictly positive CPTs (evidence never impossible)."""
    n = rng.randint(2, max_vars)
    names = [f"v{i}" for i in range(n)]
    variables = tuple(Variable(name, ("yes", "no")) for name in names)
    edges: list[tuple[str, str]] = []
    parent_lists: list[list[int]] = []
    for j in range(n):
        pool = list(range(j))
        rng.shuffle(pool)
        parents = sorted(pool[: rng.randint(0, min(3, j))])
        parent_lists.append(parents)
        for i in parents:
            edges.append((names[i], names[j]))

    cpts: dict[str, np.ndarray] = {}
    for j in range(n):
        shape = [2] * len(parent_lists[j]) + [2]
        table = np.empty(shape)
        flat = table.reshape(-1, 2)
        for row in range(flat.shape[0]):
            p = rng.uniform(0.05, 0.95)
            flat[row] = [p, 1.0 - p]
        cpts[names[j]] = table

    observed = [name for name in names if rng.random() < 0.4]
    findings = tuple(
        Finding(name, rng.choice(("yes", "no"))) for name in observed
    )
    net = BayesNet(variables, tuple(edges), cpts, (names[0],))
    return net, Evidence(findings)


_CURVE_MAKERS = (
    lambda rng: Constant(rng.uniform(0.0, 100.0)),
    lambda rng: LinearUrgency(
        rng.uniform(50.0, 100.0), -rng.uniform(0.0, 3.0), rng.uniform(0.0, 40.0)
    ),
    lambda rng: ExponentialUrgency(
        rng.uniform(10.0, 100.0), rng.uniform(0.001, 0.1), rng.uniform(0.0, 20.0)
    ),
    lambda rng: HardDeadline(
        rng.uniform(50.0, 100.0), rng.uniform(0.0, 50.0), rng.uniform(1.0, 60.0)
    ),
    lambda rng: UncertainDeadline(
        rng.uniform(50.0, 100.0),
        rng.uniform(0.0, 50.0),
        random_time_distribution(rng, low=1.0, high=90.0),
    ),
    lambda rng: _random_sagging_piecewise(rng),
)


def _random_sagging_piecewise(rng: random.Random) -> PiecewiseLinear:
    count = rng.randint(2, 4)
    times = sorted(rng.sample(range(0, 101), count))
    values = sorted((rng.uniform(0.0, 100.0) for _ in range(count)), reverse=True)
    return PiecewiseLinear(tuple((float(t), v) for t, v in zip(times, values)))


def random_time_distribution(
    rng: random.Random, low: float = 0.0, high: float = 60.0, max_atoms: int = 3
) -> TimeDistribution:
    count = rng.randint(1, max_atoms)
    times = sorted(rng.sample(range(int(low), int(high) + 1), count))
    weights = [rng.uniform(0.1, 1.0) for _ in times]
    total = sum(weights)
    return TimeDistribution(tuple((float(t), w / total) for t, w in zip(times, weights)))


def random_urgency_problem(rng: random.Random) -> DecisionProblem:
    """Random decision problem whose curves all sag (never rise) over time."""
    n_states = rng.randint(2, 3)
    n_actions = rng.randint(2, 4)
    states = tuple(f"s{i}" for i in range(n_states))
    actions = tuple(f"a{i}" for i in range(n_actions))
    curves = {
        (action, state): rng.choice(_CURVE_MAKERS)(rng)
        for action in actions
        for state in states
    }
    model = UtilityModel(actions, states, curves)
    raw = [rng.uniform(0.05, 1.0) for _ in states]
    total = sum(raw)
    post = Posterior("h", states, tuple(w / total for w in raw))
    return DecisionProblem(post, model)


def affine_curve(curve, a: float, b: float):
    """Image of a curve under u -> a*u + b (a > 0 preserves ordering)."""
    if isinstance(curve, Constant):
        return Constant(a * curve.value + b)
    if isinstance(curve, LinearUrgency):
        return LinearUrgency(a * curve.start + b, a * curve.slope, a * curve.floor + b)
    if isinstance(curve, ExponentialUrgency):
        return ExponentialUrgency(a * curve.amplitude, curve.rate, a * curve.offset + b)
    if isinstance(curve, HardDeadline):
        return HardDeadline(a * curve.pre + b, a * curve.post + b, curve.deadline)
    if isinstance(curve, UncertainDeadline):
        return UncertainDeadline(a * curve.pre + b, a * curve.post + b, curve.deadline)
    return PiecewiseLinear(tuple((t, a * v + b) for t, v in curve.knots))


def affine_problem(dp: DecisionProblem, a: float, b: float) -> DecisionProblem:
    model = dp.model
    transformed = UtilityModel(
        model.actions,
        model.hypothesis_states,
        {key: affine_curve(curve, a, b) for key, curve in model.curves.items()},
        {
            name: {key: affine_curve(c, a, b) for key, c in overlay.items()}
            for name, overlay in model.contexts.items()
        },
    )
    return DecisionProblem(dp.posterior, transformed, dp.context, dp.reference_time)


# -- independent plan oracle --------------------------------------------------


def random_plan_scenario(rng: random.Random) -> Scenario:
    """Feasible scenario within oracle bounds, deterministic travel times."""
    n_patients = rng.randint(1, 4)
    n_assets = rng.randint(1, 2)
    n_facilities = rng.randint(1, 2)
    sites = [f"site{i}" for i in range(rng.randint(1, 2))]
    fac_locs = [f"fac{i}" for i in range(n_facilities)]

    patients = tuple(
        PatientCase(f"p{i}", rng.choice(sites), random_urgency_problem(rng))
        for i in range(n_patients)
    )
    assets = tuple(
        Asset(f"amb{i}", rng.choice(sites + fac_locs)) for i in range(n_assets)
    )
    per_fac = math.ceil(n_patients / n_facilities)
    facilities = tuple(
        Facility(f"f{i}", fac_locs[i], frozenset(), per_fac + rng.randint(0, 2))
        for i in range(n_facilities)
    )
    table = {}
    places = sites + fac_locs
    for origin in places:
        for destination in places:
            if origin != destination:
                table[(origin, destination, "default")] = TimeDistribution.point_mass(
                    float(rng.randint(5, 20))
                )
    return Scenario(patients, assets, facilities, TransportModel(table), 0.0)


def _oracle_best_eu(dp: DecisionProblem, t: float) -> float:
    return max(
        math.fsum(
            w * eval_curve(dp.model.curve(action, state, dp.context), t)
            for w, state in zip(dp.posterior.weights, dp.model.hypothesis_states)
        )
        for action in dp.model.actions
    )


def oracle_min_plan_cost(scenario: Scenario) -> float:
    """Exhaustive minimum total cost, computed without the planning module.

    Assumes every travel time in the scenario is a point mass.
    """

    def leg(origin: str, destination: str) -> float:
        if origin == destination:
            key = (origin, destination, scenario.band)
            if key not in scenario.transport.table:
                return 0.0
        dist = scenario.transport.lookup(origin, destination, scenario.band)
        (atom,) = dist.support
        return atom[0]

    patients = scenario.patients
    assets = scenario.assets
    facilities = scenario.facilities
    best = math.inf
    eligible = [
        [f for f in facilities if p.required_tags <= f.tags] for p in patients
    ]
    for owner in itertools.product(range(len(assets)), repeat=len(patients)):
        for fchoice in itertools.product(*[range(len(fs)) for fs in eligible]):
            counts: dict[str, int] = {}
            for pi, fi in enumerate(fchoice):
                fac = eligible[pi][fi]
                counts[fac.id] = counts.get(fac.id, 0) + 1
            if any(counts.get(f.id, 0) > f.capacity for f in facilities):
                continue
            groups: dict[int, list[int]] = {}
            for pi, ai in enumerate(owner):
                groups.setdefault(ai, []).append(pi)
            for orders in itertools.product(
                *[itertools.permutations(groups[ai]) for ai in sorted(groups)]
            ):
                total = 0.0
                for ai, order in zip(sorted(groups), orders):
                    where = assets[ai].location
                    clock = scenario.clock
                    for pi in order:
                        patient = patients[pi]
                        fac = eligible[pi][fchoice[pi]]
                        clock += leg(where, patient.location)
                        clock += leg(patient.location, fac.location)
                        where = fac.location
                        dp = patient.problem
                        total += _oracle_best_eu(dp, dp.reference_time) - _oracle_best_eu(
                            dp, clock
                        )
                best = min(best, total)
    return best

"""Ranking transport plans for two patients and one vehicle.

Patient A shows both signs of internal bleeding (p = 0.93); patient B
shows none (prior 0.3 stands).  One medic unit must shuttle both to the
same hospital, ten minutes each way.  Whoever rides second arrives at
the thirty-minute mark, so order matters.

Every feasible plan is enumerated, each patient priced by the expected
delay cost at their arrival-time distribution, and plans ranked by the
summed cost.
"""

from timecrit import (
    Asset,
    DecisionProblem,
    Facility,
    PatientCase,
    Posterior,
    Scenario,
    TimeDistribution,
    TransportModel,
    enumerate_plans,
    evaluate_plan,
)
from timecrit.utility import Constant, ExponentialUrgency, UtilityModel

model = UtilityModel(
    actions=("transport", "observe"),
    hypothesis_states=("hemorrhage", "stable"),
    curves={
        ("transport", "hemorrhage"): ExponentialUrgency(100.0, 0.02),
        ("transport", "stable"): Constant(90.0),
        ("observe", "hemorrhage"): ExponentialUrgency(100.0, 0.05),
        ("observe", "stable"): Constant(100.0),
    },
)


def patient(pid: str, p_hemorrhage: float) -> PatientCase:
    belief = Posterior(
        "bleed", ("hemorrhage", "stable"), (p_hemorrhage, 1.0 - p_hemorrhage)
    )
    return PatientCase(pid, "scene", DecisionProblem(belief, model))


ten_minutes = TimeDistribution.point_mass(10.0)
scenario = Scenario(
    patients=(patient("A", 0.931034), patient("B", 0.3)),
    assets=(Asset("medic1", "scene"),),
    facilities=(Facility("hospital", "hospital", frozenset({"trauma"}), capacity=2),),
    transport=TransportModel({
        ("scene", "hospital", "default"): ten_minutes,
        ("hospital", "scene", "default"): ten_minutes,
    }),
)

evaluations = sorted(
    (evaluate_plan(scenario, plan) for plan in enumerate_plans(scenario)),
    key=lambda e: e.total,
)
print("plans, best first:")
for ev in evaluations:
    order = " then ".join(p for p, _ in ev.plan.trips["medic1"])
    costs = ", ".join(f"{pid}: {cost:.2f}" for pid, cost in sorted(ev.per_patient.items()))
    print(f"  carry {order:10s} total cost {ev.total:6.2f}  ({costs})")

best = evaluations[0]
print(f"\ntake the sicker patient first: "
      f"{best.plan.trips['medic1'][0][0]} rides at t=0, "
      f"arrives at t={best.arrivals[best.plan.trips['medic1'][0][0]].times[0]:.0f}")
second = best.plan.trips["medic1"][1][0]
print(f"{second} waits for the round trip, arrives at "
      f"t={best.arrivals[second].times[0]:.0f}")

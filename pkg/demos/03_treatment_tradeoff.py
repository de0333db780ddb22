"""Load-and-go versus treating on scene.

Thirty minutes in, a local intervention (a pressure dressing) can claw
back twenty minutes of effective bleeding time, at a five minute cost
to apply.  Is it better to just drive?

The comparison holds the belief fixed and prices both branches in
delay-cost terms: transporting now costs ECDA(t); treating first costs
the ECDA at the treated effective time, per hypothesis state.
"""

from timecrit import (
    DecisionProblem,
    Posterior,
    TimeDistribution,
    TimeRemoved,
    TreatmentOption,
    ecda,
    ecda_transport,
    evaluate_load_and_go,
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
belief = Posterior("bleed", ("hemorrhage", "stable"), (0.794118, 0.205882))
dp = DecisionProblem(belief, model, reference_time=0.0)

# The dressing only helps if there is actually a bleed; on a stable
# patient it removes nothing and still takes five minutes.
dressing = TreatmentOption(
    name="pressure dressing",
    admin_time=5.0,
    removed={
        "hemorrhage": TimeRemoved("constant", 20.0),
        "stable": TimeRemoved("constant", 0.0),
    },
)

verdict = evaluate_load_and_go(dp, dressing, t=30.0)
print(f"go now, arrive having lost 30 min: cost {verdict.ecda_load_and_go:.2f}")
print(f"treat first (effective 15 min for a bleed): "
      f"cost {verdict.ecda_with_treatment:.2f}")
print(f"recommendation: {verdict.recommendation}")

# Transport time itself is rarely certain.  Price a route by averaging
# the delay cost over its arrival-time distribution.
ground = TimeDistribution.point_mass(30.0)
air = TimeDistribution.of({10.0: 0.5, 20.0: 0.5})
print(f"\nroute costs from the same belief:")
print(f"  ground (30 min sharp):       {ecda_transport(dp, ground):.3f}")
print(f"  air    (10 or 20, coin-flip): {ecda_transport(dp, air):.3f}")
print(f"  (ground equals plain ECDA(30) = {ecda(dp, 30.0):.3f})")

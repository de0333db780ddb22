"""What waiting costs when action value decays with time.

With p(hemorrhage) = 0.794 after a positive blood-pressure check, the
best action flips from observing to transporting as minutes pass.  The
expected cost of delayed action (ECDA) puts a number on that: how much
expected utility is lost by acting at time t instead of now.
"""

from timecrit import (
    DecisionProblem,
    Posterior,
    TimeDistribution,
    UniformPredictor,
    best_action,
    comprehensive_ecda,
    criticality,
    ecda,
    ecdm,
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

print("best action over time:")
for t in (0.0, 5.0, 10.0, 15.0, 30.0, 60.0):
    action, eu = best_action(dp, t)
    print(f"  t={t:5.1f}  ->  {action:9s}  EU* = {eu:7.3f}  ECDA = {ecda(dp, t):7.3f}")

# The per-minute burn rate right now.
print(f"\ncriticality at t=0: {criticality(dp, 0.0):.3f} utility/minute")

# If the clock actually started some unknown time ago, average the cost
# over that onset belief instead of assuming t=0.
onset = TimeDistribution.of({0.0: 0.5, 30.0: 0.5})
print(f"cost under uncertain onset (50/50 now vs 30 min ago): "
      f"{comprehensive_ecda(dp, onset):.3f}")

# Misdiagnosis makes delay worse: if the acting clinician may pick the
# wrong action at time t, the expected cost folds in that chance.  A
# uniform predictor is the most pessimistic stance shown here.
print(f"\nECDA  at t=30 (optimal action taken late):   {ecda(dp, 30.0):7.3f}")
print(f"ECDM  at t=30 (action chosen uniformly late): "
      f"{ecdm(dp, UniformPredictor(), 30.0):7.3f}")

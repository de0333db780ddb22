"""Diagnosing a hidden process from noisy findings.

A field medic suspects internal bleeding.  Two signs are checkable on
scene: hypotension and abdominal distension.  Neither is conclusive, so
we encode the relationship as a small Bayesian network and update the
belief as findings come in.
"""

from timecrit import BayesNet, Evidence, posterior, value_of_information
from timecrit.utility import Constant, ExponentialUrgency, UtilityModel

# One hidden cause, two conditionally independent signs.
net = BayesNet.build(
    variables=[
        ("bleed", ["hemorrhage", "stable"]),
        ("hypotension", ["present", "absent"]),
        ("distension", ["present", "absent"]),
    ],
    edges=[("bleed", "hypotension"), ("bleed", "distension")],
    cpts={
        "bleed": [0.3, 0.7],
        "hypotension": {"hemorrhage": [0.9, 0.1], "stable": [0.1, 0.9]},
        "distension": {"hemorrhage": [0.7, 0.3], "stable": [0.2, 0.8]},
    },
    hypothesis=["bleed"],
)

print("prior belief:")
prior = posterior(net, "bleed")
for state, weight in prior.ranked():
    print(f"  p({state}) = {weight:.4f}")

# The blood-pressure cuff comes back low.
after_bp = posterior(net, "bleed", Evidence.of(hypotension="present"))
print("\nafter observing hypotension:")
for state, weight in after_bp.ranked():
    print(f"  p({state}) = {weight:.4f}")

# Palpation finds a distended abdomen too.
after_both = posterior(
    net, "bleed", Evidence.of(hypotension="present", distension="present")
)
print("\nafter observing both signs:")
for state, weight in after_both.ranked():
    print(f"  p({state}) = {weight:.4f}")

# Which unchecked sign is worth checking first?  Expected value of
# information weighs each candidate by how much a look could improve
# the action taken afterward, so it needs the action utilities.
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
report = value_of_information(
    net, "bleed", Evidence(), ["hypotension", "distension"], model, t=30.0
)
print("\nvalue of checking each sign (no findings yet, 30 min in):")
for entry in report.entries:
    print(f"  {entry.variable}: EVI = {entry.evi:.3f}")
print(f"check first: {report.top().variable}")

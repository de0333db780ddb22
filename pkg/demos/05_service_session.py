"""Driving a live session through the service layer.

The service wraps the library for interactive use: load a model once,
open a session per patient, post findings as they arrive, and read back
a full assessment (posterior, best action, delay-cost curve, value of
information) at any time.  Sessions serialize to JSON for handoff.
"""

import json

from timecrit import DecisionService

MODEL = {
    "meta": {"name": "field hemorrhage triage", "time_unit": "minutes"},
    "variables": [
        {"name": "bleed", "states": ["hemorrhage", "stable"]},
        {"name": "hypotension", "states": ["present", "absent"]},
        {"name": "distension", "states": ["present", "absent"]},
    ],
    "edges": [["bleed", "hypotension"], ["bleed", "distension"]],
    "cpts": {
        "bleed": [0.3, 0.7],
        "hypotension": {"hemorrhage": [0.9, 0.1], "stable": [0.1, 0.9]},
        "distension": {"hemorrhage": [0.7, 0.3], "stable": [0.2, 0.8]},
    },
    "hypothesis": ["bleed"],
    "actions": ["transport", "observe"],
    "utility": {
        "transport": {
            "hemorrhage": {"kind": "exponential_urgency",
                           "params": {"amplitude": 100.0, "rate": 0.02}},
            "stable": {"kind": "constant", "params": {"value": 90.0}},
        },
        "observe": {
            "hemorrhage": {"kind": "exponential_urgency",
                           "params": {"amplitude": 100.0, "rate": 0.05}},
            "stable": {"kind": "constant", "params": {"value": 100.0}},
        },
    },
}

service = DecisionService()
model_id = service.load_model(MODEL)
session_id = service.create_session(model_id)
print(f"model {model_id}, session {session_id}")

# Findings arrive with timestamps; each post returns a fresh assessment.
assessment = service.post_finding(session_id, "hypotension", "present", timestamp=2.0)
hyp = assessment.hypotheses[0]
print(f"\nt=2, hypotension present:")
print(f"  p(hemorrhage) = {hyp.posterior.prob('hemorrhage'):.4f}")
print(f"  best action now: {hyp.best_action} (EU* = {hyp.expected_utility:.2f})")

# Ten minutes later, ask what further delay would cost.
assessment = service.get_assessment(session_id, now=12.0, grid=(0.0, 5.0, 15.0, 30.0))
hyp = assessment.hypotheses[0]
print(f"\nt=12 delay curve (delay -> cost):")
for delay, cost in hyp.ecda_curve:
    print(f"  +{delay:4.0f} min: {cost:7.3f}")
print(f"  burn rate: {hyp.criticality:.3f}/min; "
      f"next finding worth checking: "
      f"{hyp.voi.entries[0].variable if hyp.voi.entries else 'none'}")

# A later reading supersedes the earlier one for the same variable; the
# log keeps both.
assessment = service.post_finding(session_id, "hypotension", "absent", timestamp=20.0)
hyp = assessment.hypotheses[0]
print(f"\nt=20, pressure recovered:")
print(f"  p(hemorrhage) = {hyp.posterior.prob('hemorrhage'):.4f}")
print(f"  log entries: {len(assessment.log)}, "
      f"current evidence: {[(f.variable, f.state) for f in assessment.evidence]}")

# Hand the session to another process.
blob = service.save_session(session_id)
twin = DecisionService()
twin.load_model(json.loads(service.export_model(model_id).decode()))
restored = twin.load_session(blob)
again = twin.get_assessment(restored, now=20.0).hypotheses[0]
print(f"\nrestored elsewhere, same belief: "
      f"p(hemorrhage) = {again.posterior.prob('hemorrhage'):.4f}")

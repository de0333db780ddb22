import json

import pytest

from timecrit import (
    BayesNet,
    Constant,
    ExponentialUrgency,
    UtilityModel,
    Variable,
)


# Expose each test's outcome to its fixtures (used by the acceptance
# suite's PASS/FAIL reporter).
@pytest.hookimpl(tryfirst=True, hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    setattr(item, f"rep_{rep.when}", rep)

# Field-triage fixture used throughout: one binary cause with two noisy
# signs, and two actions whose value decays at different rates while the
# cause goes untreated.
HEMORRHAGE_DOC = {
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
            "hemorrhage": {
                "kind": "exponential_urgency",
                "params": {"amplitude": 100.0, "rate": 0.02},
            },
            "stable": {"kind": "constant", "params": {"value": 90.0}},
        },
        "observe": {
            "hemorrhage": {
                "kind": "exponential_urgency",
                "params": {"amplitude": 100.0, "rate": 0.05},
            },
            "stable": {"kind": "constant", "params": {"value": 100.0}},
        },
    },
}


def build_hemorrhage_net() -> BayesNet:
    return BayesNet.build(
        variables=[
            Variable("bleed", ("hemorrhage", "stable")),
            Variable("hypotension", ("present", "absent")),
            Variable("distension", ("present", "absent")),
        ],
        edges=[("bleed", "hypotension"), ("bleed", "distension")],
        cpts={
            "bleed": [0.3, 0.7],
            "hypotension": {"hemorrhage": [0.9, 0.1], "stable": [0.1, 0.9]},
            "distension": {"hemorrhage": [0.7, 0.3], "stable": [0.2, 0.8]},
        },
        hypothesis=["bleed"],
    )


def build_hemorrhage_utilities() -> UtilityModel:
    return UtilityModel(
        actions=("transport", "observe"),
        hypothesis_states=("hemorrhage", "stable"),
        curves={
            ("transport", "hemorrhage"): ExponentialUrgency(100.0, 0.02),
            ("transport", "stable"): Constant(90.0),
            ("observe", "hemorrhage"): ExponentialUrgency(100.0, 0.05),
            ("observe", "stable"): Constant(100.0),
        },
    )


def two_patient_scenario_doc() -> dict:
    return {
        "clock": 0.0,
        "models": {"hemorrhage": HEMORRHAGE_DOC},
        "patients": [
            {
                "id": "A",
                "location": "scene",
                "model": "hemorrhage",
                "findings": {"hypotension": "present", "distension": "present"},
            },
            {"id": "B", "location": "scene", "model": "hemorrhage", "findings": {}},
        ],
        "assets": [{"id": "medic1", "location": "scene"}],
        "facilities": [
            {"id": "hospital", "location": "hospital", "tags": ["trauma"], "capacity": 2}
        ],
        "transport": [
            {"origin": "scene", "destination": "hospital", "support": [[10.0, 1.0]]},
            {"origin": "hospital", "destination": "scene", "support": [[10.0, 1.0]]},
        ],
    }


@pytest.fixture
def hemorrhage_net() -> BayesNet:
    return build_hemorrhage_net()


@pytest.fixture
def hemorrhage_utilities() -> UtilityModel:
    return build_hemorrhage_utilities()


@pytest.fixture
def hemorrhage_doc() -> dict:
    return json.loads(json.dumps(HEMORRHAGE_DOC))


@pytest.fixture
def scenario_doc() -> dict:
    return json.loads(json.dumps(two_patient_scenario_doc()))


@pytest.fixture
def model_file(tmp_path, hemorrhage_doc):
    path = tmp_path / "hemorrhage_model.json"
    path.write_text(json.dumps(hemorrhage_doc))
    return path


@pytest.fixture
def scenario_file(tmp_path, scenario_doc):
    path = tmp_path / "two_patient_scenario.json"
    path.write_text(json.dumps(scenario_doc))
    return path

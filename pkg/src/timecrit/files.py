"""JSON document formats for models, scenarios, and sessions.

Declaration order in documents is significant and preserved: variable and
state order drives every downstream table, report, and tie-break.  Parse
failures raise ``ParseError`` with a dotted path to the offending field.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .bayes import BayesNet, Evidence, Finding
from .bayes import posterior as _infer
from .decisions import DecisionProblem, TimeRemoved, TreatmentOption
from .errors import ParseError
from .planning import (
    Asset,
    Facility,
    PatientCase,
    Scenario,
    TransportModel,
)
from .utility import (
    Constant,
    ExponentialUrgency,
    HardDeadline,
    LinearUrgency,
    PiecewiseLinear,
    TimeDistribution,
    UncertainDeadline,
    UtilityCurve,
    UtilityModel,
)

PARENT_KEY_SEPARATOR = ","


@dataclass(frozen=True)
class ModelDefinition:
    """A parsed model document: network plus utilities per hypothesis variable."""

    net: BayesNet
    utilities: Mapping[str, UtilityModel]
    meta: Mapping[str, Any] = field(default_factory=dict)


def _require(doc: Mapping, key: str, path: str) -> Any:
    if not isinstance(doc, Mapping):
        raise ParseError(f"expected an object at {path or 'top level'}", path)
    if key not in doc:
        raise ParseError(f"missing required key {key!r}", f"{path}.{key}".lstrip("."))
    return doc[key]


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", path)
    return float(value)


def parse_time_distribution(doc: Any, path: str) -> TimeDistribution:
    if isinstance(doc, (int, float)) and not isinstance(doc, bool):
        return TimeDistribution.point_mass(float(doc))
    support = _require(doc, "support", path)
    if not isinstance(support, list) or not support:
        raise ParseError("support must be a non-empty list of [time, weight] pairs",
                         f"{path}.support")
    atoms = []
    for i, pair in enumerate(support):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("each atom must be a [time, weight] pair",
                             f"{path}.support[{i}]")
        atoms.append((_number(pair[0], f"{path}.support[{i}][0]"),
                      _number(pair[1], f"{path}.support[{i}][1]")))
    try:
        return TimeDistribution(tuple(atoms))
    except Exception as exc:
        raise ParseError(str(exc), f"{path}.support") from exc


def _dump_time_distribution(dist: TimeDistribution) -> dict:
    return {"support": [[t, w] for t, w in dist.support]}


_CURVE_KINDS = {
    "constant",
    "linear_urgency",
    "exponential_urgency",
    "hard_deadline",
    "uncertain_deadline",
    "piecewise_linear",
}


def parse_curve(doc: Any, path: str) -> UtilityCurve:
    kind = _require(doc, "kind", path)
    params = doc.get("params", {})
    if not isinstance(params, Mapping):
        raise ParseError("params must be an object", f"{path}.params")
    if kind not in _CURVE_KINDS:
        raise ParseError(f"unknown curve kind {kind!r}", f"{path}.kind")
    try:
        if kind == "constant":
            return Constant(_number(_require(params, "value", path), f"{path}.params.value"))
        if kind == "linear_urgency":
            return LinearUrgency(
                _number(_require(params, "start", path), f"{path}.params.start"),
                _number(_require(params, "slope", path), f"{path}.params.slope"),
                _number(_require(params, "floor", path), f"{path}.params.floor"),
            )
        if kind == "exponential_urgency":
            return ExponentialUrgency(
                _number(_require(params, "amplitude", path), f"{path}.params.amplitude"),
                _number(_require(params, "rate", path), f"{path}.params.rate"),
                _number(params.get("offset", 0.0), f"{path}.params.offset"),
            )
        if kind == "hard_deadline":
            return HardDeadline(
                _number(_require(params, "pre", path), f"{path}.params.pre"),
                _number(_require(params, "post", path), f"{path}.params.post"),
                _number(_require(params, "deadline", path), f"{path}.params.deadline"),
            )
        if kind == "uncertain_deadline":
            return UncertainDeadline(
                _number(_require(params, "pre", path), f"{path}.params.pre"),
                _number(_require(params, "post", path), f"{path}.params.post"),
                parse_time_distribution(
                    _require(params, "deadline", path), f"{path}.params.deadline"
                ),
            )
        knots = _require(params, "knots", path)
        if not isinstance(knots, list):
            raise ParseError("knots must be a list of [t, value] pairs",
                             f"{path}.params.knots")
        return PiecewiseLinear(
            tuple(
                (_number(k[0], f"{path}.params.knots[{i}][0]"),
                 _number(k[1], f"{path}.params.knots[{i}][1]"))
                for i, k in enumerate(knots)
            )
        )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(str(exc), path) from exc


def _dump_curve(curve: UtilityCurve) -> dict:
    if isinstance(curve, Constant):
        return {"kind": "constant", "params": {"value": curve.value}}
    if isinstance(curve, LinearUrgency):
        return {"kind": "linear_urgency",
                "params": {"start": curve.start, "slope": curve.slope, "floor": curve.floor}}
    if isinstance(curve, ExponentialUrgency):
        return {"kind": "exponential_urgency",
                "params": {"amplitude": curve.amplitude, "rate": curve.rate,
                           "offset": curve.offset}}
    if isinstance(curve, HardDeadline):
        return {"kind": "hard_deadline",
                "params": {"pre": curve.pre, "post": curve.post, "deadline": curve.deadline}}
    if isinstance(curve, UncertainDeadline):
        return {"kind": "uncertain_deadline",
                "params": {"pre": curve.pre, "post": curve.post,
                           "deadline": _dump_time_distribution(curve.deadline)}}
    return {"kind": "piecewise_linear",
            "params": {"knots": [[t, v] for t, v in curve.knots]}}


def _parse_utility_table(
    doc: Any, actions: tuple[str, ...], states: tuple[str, ...], path: str
) -> dict[tuple[str, str], UtilityCurve]:
    if not isinstance(doc, Mapping):
        raise ParseError("expected action -> state -> curve table", path)
    curves: dict[tuple[str, str], UtilityCurve] = {}
    for action, per_state in doc.items():
        if action not in actions:
            raise ParseError(f"unknown action {action!r}", f"{path}.{action}")
        if not isinstance(per_state, Mapping):
            raise ParseError("expected state -> curve object", f"{path}.{action}")
        for state, curve_doc in per_state.items():
            if state not in states:
                raise ParseError(f"unknown hypothesis state {state!r}",
                                 f"{path}.{action}.{state}")
            curves[(action, state)] = parse_curve(curve_doc, f"{path}.{action}.{state}")
    return curves


def parse_model(data: bytes | str | Mapping) -> ModelDefinition:
    """Parse a model document; raises ParseError with a path on any defect."""
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", "") from exc
    else:
        doc = data
    if not isinstance(doc, Mapping):
        raise ParseError("model document must be a JSON object", "")

    variables_doc = _require(doc, "variables", "")
    if not isinstance(variables_doc, list) or not variables_doc:
        raise ParseError("variables must be a non-empty list", "variables")
    variables: list[tuple[str, tuple[str, ...]]] = []
    for i, var in enumerate(variables_doc):
        name = _require(var, "name", f"variables[{i}]")
        states = _require(var, "states", f"variables[{i}]")
        if not isinstance(states, list) or not all(isinstance(s, str) for s in states):
            raise ParseError("states must be a list of strings", f"variables[{i}].states")
        variables.append((name, tuple(states)))
    by_name = dict(variables)

    edges_doc = doc.get("edges", [])
    edges: list[tuple[str, str]] = []
    for i, edge in enumerate(edges_doc):
        if not isinstance(edge, list) or len(edge) != 2:
            raise ParseError("each edge must be a [parent, child] pair", f"edges[{i}]")
        edges.append((edge[0], edge[1]))

    parent_map: dict[str, list[str]] = {name: [] for name, _ in variables}
    for parent, child in edges:
        if parent not in by_name:
            raise ParseError(f"edge parent {parent!r} is not a declared variable", "edges")
        if child not in by_name:
            raise ParseError(f"edge child {child!r} is not a declared variable", "edges")
        parent_map[child].append(parent)

    cpts_doc = _require(doc, "cpts", "")
    rows: dict[str, object] = {}
    for name, table in cpts_doc.items():
        if name not in by_name:
            raise ParseError(f"CPT for unknown variable {name!r}", f"cpts.{name}")
        parents = parent_map[name]
        if not parents:
            if isinstance(table, Mapping):
                table = table.get("", table)
            if not isinstance(table, list):
                raise ParseError("root CPT must be a probability list", f"cpts.{name}")
            rows[name] = [_number(x, f"cpts.{name}") for x in table]
            continue
        if not isinstance(table, Mapping):
            raise ParseError("CPT must map parent assignments to rows", f"cpts.{name}")
        keyed: dict[tuple[str, ...], list[float]] = {}
        for key, row in table.items():
            parts = tuple(key.split(PARENT_KEY_SEPARATOR))
            if len(parts) != len(parents):
                raise ParseError(
                    f"row key {key!r} must name one state per parent {tuple(parents)}",
                    f"cpts.{name}[{key}]",
                )
            if not isinstance(row, list):
                raise ParseError("row must be a probability list", f"cpts.{name}[{key}]")
            keyed[parts] = [_number(x, f"cpts.{name}[{key}]") for x in row]
        rows[name] = keyed

    hypothesis_doc = doc.get("hypothesis", [])
    hypothesis = (hypothesis_doc,) if isinstance(hypothesis_doc, str) else tuple(hypothesis_doc)

    try:
        net = BayesNet.build(variables, edges, rows, hypothesis)
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(str(exc), "cpts") from exc

    actions_doc = doc.get("actions", [])
    actions = tuple(actions_doc)
    utilities: dict[str, UtilityModel] = {}
    utility_doc = doc.get("utility")
    if utility_doc is not None:
        if not hypothesis:
            raise ParseError("utility table requires a hypothesis declaration", "utility")
        if not actions:
            raise ParseError("utility table requires an actions list", "actions")
        nested = len(hypothesis) > 1
        for hyp in hypothesis:
            if hyp not in by_name:
                raise ParseError(f"hypothesis variable {hyp!r} not declared", "hypothesis")
            states = by_name[hyp]
            table_doc = _require(utility_doc, hyp, "utility") if nested else utility_doc
            table_path = f"utility.{hyp}" if nested else "utility"
            curves = _parse_utility_table(table_doc, actions, states, table_path)
            contexts_doc = doc.get("contexts", {})
            contexts: dict[str, dict[tuple[str, str], UtilityCurve]] = {}
            for ctx_name, overlay_doc in contexts_doc.items():
                overlay_table = (
                    overlay_doc.get(hyp, {}) if nested else overlay_doc
                )
                contexts[ctx_name] = _parse_utility_table(
                    overlay_table, actions, states, f"contexts.{ctx_name}"
                )
            try:
                utilities[hyp] = UtilityModel(actions, states, curves, contexts)
            except Exception as exc:
                raise ParseError(str(exc), table_path) from exc

    meta = doc.get("meta", {})
    if not isinstance(meta, Mapping):
        raise ParseError("meta must be an object", "meta")
    return ModelDefinition(net, utilities, dict(meta))


def dump_model(definition: ModelDefinition) -> dict:
    """Serialize back to the document schema; floats round-trip exactly."""
    net = definition.net
    doc: dict[str, Any] = {
        "meta": dict(definition.meta),
        "variables": [
            {"name": v.name, "states": list(v.states)} for v in net.variables
        ],
        "edges": [[p, c] for p, c in net.edges],
    }
    cpts: dict[str, Any] = {}
    for var in net.variables:
        parents = net.parents(var.name)
        table = net.cpts[var.name]
        if not parents:
            cpts[var.name] = [float(x) for x in table.reshape(-1)]
            continue
        keyed: dict[str, list[float]] = {}
        parent_states = [net.states(p) for p in parents]
        for combo in itertools.product(*parent_states):
            idx = tuple(ps.index(s) for ps, s in zip(parent_states, combo))
            row = table[idx]
            keyed[PARENT_KEY_SEPARATOR.join(combo)] = [float(x) for x in row]
        cpts[var.name] = keyed
    doc["cpts"] = cpts
    doc["hypothesis"] = list(net.hypothesis_vars)

    if definition.utilities:
        first = next(iter(definition.utilities.values()))
        doc["actions"] = list(first.actions)
        nested = len(definition.utilities) > 1

        def table_doc(model: UtilityModel, curves: Mapping) -> dict:
            out: dict[str, dict[str, dict]] = {}
            for action in model.actions:
                per_state = {}
                for state in model.hypothesis_states:
                    if (action, state) in curves:
                        per_state[state] = _dump_curve(curves[(action, state)])
                if per_state:
                    out[action] = per_state
            return out

        if nested:
            doc["utility"] = {
                hyp: table_doc(m, m.curves) for hyp, m in definition.utilities.items()
            }
            context_names = sorted(
                {name for m in definition.utilities.values() for name in m.contexts}
            )
            doc["contexts"] = {
                name: {
                    hyp: table_doc(m, m.contexts.get(name, {}))
                    for hyp, m in definition.utilities.items()
                    if name in m.contexts
                }
                for name in context_names
            }
        else:
            model = first
            doc["utility"] = table_doc(model, model.curves)
            doc["contexts"] = {
                name: table_doc(model, overlay)
                for name, overlay in model.contexts.items()
            }
    return doc


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioDefinition:
    scenario: Scenario
    models: Mapping[str, ModelDefinition]
    patient_models: Mapping[str, str]  # patient id -> model name


def parse_treatment(doc: Any, path: str = "treatment") -> TreatmentOption:
    name = doc.get("name", "treatment") if isinstance(doc, Mapping) else None
    if name is None:
        raise ParseError("treatment must be an object", path)
    admin = _number(_require(doc, "admin_time", path), f"{path}.admin_time")
    removed_doc = doc.get("removed", {})
    if not isinstance(removed_doc, Mapping):
        raise ParseError("removed must map hypothesis states to credits",
                         f"{path}.removed")
    removed: dict[str, TimeRemoved] = {}
    for state, credit in removed_doc.items():
        credit_path = f"{path}.removed.{state}"
        kind = _require(credit, "kind", credit_path)
        value_key = "minutes" if kind == "constant" else "fraction"
        value = _number(_require(credit, value_key, credit_path),
                        f"{credit_path}.{value_key}")
        try:
            removed[state] = TimeRemoved(kind, value)
        except Exception as exc:
            raise ParseError(str(exc), credit_path) from exc
    try:
        return TreatmentOption(name, admin, removed)
    except Exception as exc:
        raise ParseError(str(exc), path) from exc


def parse_scenario(data: bytes | str | Mapping) -> ScenarioDefinition:
    """Parse a self-contained scenario document (models inline)."""
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", "") from exc
    else:
        doc = data
    if not isinstance(doc, Mapping):
        raise ParseError("scenario document must be a JSON object", "")

    clock = _number(doc.get("clock", 0.0), "clock")
    band = doc.get("band", "default")

    models_doc = doc.get("models", {})
    if not isinstance(models_doc, Mapping):
        raise ParseError("models must map names to model documents", "models")
    models = {}
    for name, model_doc in models_doc.items():
        try:
            models[name] = parse_model(model_doc)
        except ParseError as exc:
            raise ParseError(exc.message, f"models.{name}.{exc.path}".rstrip(".")) from exc

    patients: list[PatientCase] = []
    patient_models: dict[str, str] = {}
    for i, pdoc in enumerate(_require(doc, "patients", "")):
        path = f"patients[{i}]"
        pid = _require(pdoc, "id", path)
        location = _require(pdoc, "location", path)
        model_name = _require(pdoc, "model", path)
        if model_name not in models:
            raise ParseError(f"patient references undeclared model {model_name!r}",
                             f"{path}.model")
        definition = models[model_name]
        findings_doc = pdoc.get("findings", {})
        if not isinstance(findings_doc, Mapping):
            raise ParseError("findings must map variables to states", f"{path}.findings")
        evidence = Evidence(tuple(Finding(v, s) for v, s in findings_doc.items()))
        hyp_vars = definition.net.hypothesis_vars
        if not hyp_vars or not definition.utilities:
            raise ParseError(
                f"model {model_name!r} lacks a hypothesis/utility declaration "
                "needed for planning",
                f"{path}.model",
            )
        hyp = hyp_vars[0]
        try:
            post = _infer(definition.net, hyp, evidence)
        except Exception as exc:
            raise ParseError(str(exc), f"{path}.findings") from exc
        context = pdoc.get("context")
        problem = DecisionProblem(post, definition.utilities[hyp], context, clock)
        onset_doc = pdoc.get("onset")
        onset = (
            parse_time_distribution(onset_doc, f"{path}.onset")
            if onset_doc is not None
            else TimeDistribution.point_mass(0.0)
        )
        requires = frozenset(pdoc.get("requires", []))
        patients.append(PatientCase(pid, location, problem, onset, requires))
        patient_models[pid] = model_name

    assets = []
    for i, adoc in enumerate(_require(doc, "assets", "")):
        path = f"assets[{i}]"
        assets.append(Asset(_require(adoc, "id", path), _require(adoc, "location", path)))

    facilities = []
    for i, fdoc in enumerate(_require(doc, "facilities", "")):
        path = f"facilities[{i}]"
        try:
            facilities.append(
                Facility(
                    _require(fdoc, "id", path),
                    _require(fdoc, "location", path),
                    frozenset(fdoc.get("tags", [])),
                    int(fdoc.get("capacity", 1)),
                )
            )
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(str(exc), path) from exc

    table: dict[tuple[str, str, str], TimeDistribution] = {}
    for i, tdoc in enumerate(doc.get("transport", [])):
        path = f"transport[{i}]"
        key = (
            _require(tdoc, "origin", path),
            _require(tdoc, "destination", path),
            tdoc.get("band", "default"),
        )
        table[key] = parse_time_distribution(tdoc, path)

    try:
        scenario = Scenario(
            tuple(patients), tuple(assets), tuple(facilities),
            TransportModel(table), clock, band,
        )
    except Exception as exc:
        raise ParseError(str(exc), "") from exc
    return ScenarioDefinition(scenario, models, patient_models)

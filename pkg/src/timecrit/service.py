"""Session-oriented service: model store, finding logs, assessments, plans.

Model bundles are immutable once loaded.  Sessions are replaced wholesale
under a lock on every mutation, so concurrent readers always see a
consistent snapshot of the log.  Every figure in an assessment is
recomputable by calling the underlying modules directly on the session's
current evidence; the service adds bookkeeping, never math.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .bayes import (
    BayesNet,
    Evidence,
    Finding,
    Posterior,
    ValidationReport,
    VoiReport,
    posterior,
    validate_network,
    value_of_information,
)
from .decisions import (
    DecisionProblem,
    LoadAndGoReport,
    TreatmentOption,
    best_action,
    comprehensive_ecda,
    criticality,
    ecda,
    ecda_transport,
    evaluate_load_and_go,
)
from .errors import (
    InfeasibleScenarioError,
    InputError,
    NotFoundError,
    ParseError,
    TimecritError,
)
from .files import (
    ModelDefinition,
    ScenarioDefinition,
    dump_model,
    parse_model,
    parse_scenario,
    parse_time_distribution,
    parse_treatment,
)
from .planning import PlanEvaluation, enumerate_plans, evaluate_plan
from .utility import TimeDistribution, UtilityModel

DEFAULT_DELAY_GRID = (0.0, 5.0, 10.0, 15.0, 30.0, 60.0, 120.0)

SESSION_DOC_KIND = "timecrit-session"
SESSION_DOC_VERSION = 1


class ValidationFailure(TimecritError):
    """A model failed network/utility validation at load time."""

    code = "validation_error"

    def __init__(self, report: ValidationReport):
        details = "; ".join(f"{v.path}: {v.message}" for v in report.violations)
        super().__init__(f"model validation failed: {details}")
        self.report = report
        self.violations = report.violations


@dataclass(frozen=True)
class ModelBundle:
    id: str
    definition: ModelDefinition

    @property
    def net(self) -> BayesNet:
        return self.definition.net

    @property
    def utilities(self) -> Mapping[str, UtilityModel]:
        return self.definition.utilities


@dataclass(frozen=True)
class Session:
    id: str
    model_id: str
    log: tuple[Finding, ...] = ()
    origin: float = 0.0
    onset: TimeDistribution = field(
        default_factory=lambda: TimeDistribution.point_mass(0.0)
    )
    context: str | None = None

    def current_evidence(self) -> Evidence:
        """Last entry per variable, in first-observation order."""
        latest: dict[str, Finding] = {}
        for finding in self.log:
            latest[finding.variable] = finding
        return Evidence(tuple(latest.values()))


@dataclass(frozen=True)
class HypothesisAssessment:
    variable: str
    posterior: Posterior
    best_action: str
    expected_utility: float
    ecda_curve: tuple[tuple[float, float], ...]
    criticality: float
    comprehensive_ecda: float
    voi: VoiReport


@dataclass(frozen=True)
class Assessment:
    session_id: str
    now: float
    grid: tuple[float, ...]
    evidence: tuple[Finding, ...]
    log: tuple[Finding, ...]
    hypotheses: tuple[HypothesisAssessment, ...]
    load_and_go: LoadAndGoReport | None = None
    transport: Mapping[str, float] | None = None

    def to_dict(self) -> dict:
        doc = {
            "session": self.session_id,
            "now": self.now,
            "grid": list(self.grid),
            "evidence": [[f.variable, f.state, f.timestamp] for f in self.evidence],
            "log": [[f.variable, f.state, f.timestamp] for f in self.log],
            "hypotheses": [
                {
                    "variable": h.variable,
                    "posterior": _posterior_dict(h.posterior),
                    "best_action": h.best_action,
                    "expected_utility": h.expected_utility,
                    "ecda": [[d, c] for d, c in h.ecda_curve],
                    "criticality": h.criticality,
                    "comprehensive_ecda": h.comprehensive_ecda,
                    "voi": _voi_dict(h.voi),
                }
                for h in self.hypotheses
            ],
        }
        if self.load_and_go is not None:
            doc["load_and_go"] = load_and_go_dict(self.load_and_go)
        if self.transport is not None:
            doc["transport"] = dict(self.transport)
        return doc


def _posterior_dict(post: Posterior) -> dict:
    return {
        "variable": post.variable,
        "states": list(post.states),
        "weights": list(post.weights),
        "ranked": [[s, w] for s, w in post.ranked()],
    }


def _voi_dict(report: VoiReport) -> dict:
    return {
        "time": report.time,
        "entries": [
            {
                "variable": e.variable,
                "evi": e.evi,
                "observed": e.observed,
                "outcomes": [
                    {
                        "state": o.state,
                        "probability": o.probability,
                        "best_action": o.best_action,
                        "expected_utility": o.expected_utility,
                    }
                    for o in e.outcomes
                ],
            }
            for e in report.entries
        ],
    }


def plan_evaluation_dict(evaluation: PlanEvaluation) -> dict:
    return {
        "trips": {
            asset: [[p, f] for p, f in legs]
            for asset, legs in evaluation.plan.trips.items()
        },
        "per_patient": dict(evaluation.per_patient),
        "arrivals": {
            pid: {"support": [[t, w] for t, w in dist.support]}
            for pid, dist in evaluation.arrivals.items()
        },
        "total": evaluation.total,
    }


def load_and_go_dict(report: LoadAndGoReport) -> dict:
    return {
        "ecda_load_and_go": report.ecda_load_and_go,
        "ecda_with_treatment": report.ecda_with_treatment,
        "recommendation": report.recommendation,
    }


class DecisionService:
    """In-memory store of model bundles and patient sessions."""

    def __init__(self):
        self._models: dict[str, ModelBundle] = {}
        self._sessions: dict[str, Session] = {}
        self._lock = threading.RLock()
        self._counter = 0

    def _next_id(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}{self._counter}"

    # -- models --------------------------------------------------------------

    def load_model(self, data: bytes | str | Mapping) -> str:
        definition = parse_model(data)
        report = validate_network(definition.net)
        if not report.ok:
            raise ValidationFailure(report)
        for hyp, model in definition.utilities.items():
            if model.hypothesis_states != definition.net.states(hyp):
                raise InputError(
                    f"utility states for {hyp!r} do not match the variable's states"
                )
        with self._lock:
            model_id = self._next_id("m")
            self._models[model_id] = ModelBundle(model_id, definition)
        return model_id

    def model(self, model_id: str) -> ModelBundle:
        try:
            return self._models[model_id]
        except KeyError:
            raise NotFoundError(f"unknown model id {model_id!r}") from None

    def models(self) -> dict[str, ModelBundle]:
        with self._lock:
            return dict(self._models)

    def export_model(self, model_id: str) -> bytes:
        bundle = self.model(model_id)
        return json.dumps(dump_model(bundle.definition)).encode("utf-8")

    # -- sessions ------------------------------------------------------------

    def create_session(
        self,
        model_id: str,
        onset: TimeDistribution | float | Mapping | None = None,
        context: str | None = None,
        origin: float = 0.0,
    ) -> str:
        bundle = self.model(model_id)
        if onset is None:
            onset = TimeDistribution.point_mass(0.0)
        elif not isinstance(onset, TimeDistribution):
            onset = parse_time_distribution(onset, "onset")
        if context is not None:
            for model in bundle.utilities.values():
                if context not in model.contexts:
                    raise InputError(f"unknown control context {context!r}")
        with self._lock:
            session_id = self._next_id("s")
            self._sessions[session_id] = Session(
                session_id,
                model_id,
                (),
                origin,
                onset,
                context,
            )
        return session_id

    def session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise NotFoundError(f"unknown session id {session_id!r}") from None

    def post_finding(
        self, session_id: str, variable: str, state: str, timestamp: float
    ) -> Assessment:
        with self._lock:
            session = self.session(session_id)
            bundle = self.model(session.model_id)
            bundle.net.state_index(variable, state)  # raises on unknown names
            if session.log and timestamp < session.log[-1].timestamp:
                raise InputError(
                    f"timestamp {timestamp!r} precedes the last log entry "
                    f"at {session.log[-1].timestamp!r}"
                )
            updated = replace(
                session, log=session.log + (Finding(variable, state, timestamp),)
            )
            self._sessions[session_id] = updated
        return self.get_assessment(session_id, now=timestamp)

    @staticmethod
    def _coerce_routes(routes: Mapping) -> dict[str, TimeDistribution]:
        return {
            str(name): dist
            if isinstance(dist, TimeDistribution)
            else parse_time_distribution(dist, f"routes.{name}")
            for name, dist in routes.items()
        }

    def get_assessment(
        self,
        session_id: str,
        now: float,
        grid: Sequence[float] | None = None,
        treatment: TreatmentOption | Mapping | None = None,
        routes: Mapping[str, TimeDistribution | Mapping] | None = None,
        treatment_time: float | None = None,
    ) -> Assessment:
        session = self.session(session_id)
        bundle = self.model(session.model_id)
        if now < 0:
            raise InputError("assessment time must be >= 0")
        delays = tuple(float(d) for d in (grid if grid is not None else DEFAULT_DELAY_GRID))
        if any(d < 0 for d in delays):
            raise InputError("delay grid values must be >= 0")
        if list(delays) != sorted(delays):
            raise InputError("delay grid must be sorted ascending")

        evidence = session.current_evidence()
        observed = {f.variable for f in evidence.findings}
        blocks: list[HypothesisAssessment] = []
        first_dp: DecisionProblem | None = None
        for hyp, model in bundle.utilities.items():
            post = posterior(bundle.net, hyp, evidence)
            dp = DecisionProblem(post, model, session.context, reference_time=now)
            if first_dp is None:
                first_dp = dp
            action, eu = best_action(dp, now)
            curve = tuple((d, ecda(dp, now + d)) for d in delays)
            crit = criticality(dp, now)
            comprehensive = comprehensive_ecda(dp, session.onset.shift(now))
            candidates = [
                v.name
                for v in bundle.net.variables
                if v.name not in bundle.net.hypothesis_vars and v.name not in observed
            ]
            voi = value_of_information(
                bundle.net, hyp, evidence, candidates, model, now
            )
            blocks.append(
                HypothesisAssessment(hyp, post, action, eu, curve, crit, comprehensive, voi)
            )

        # Optional extras ride on the leading hypothesis's decision problem.
        extra_go: LoadAndGoReport | None = None
        extra_routes: dict[str, float] | None = None
        if first_dp is not None:
            if treatment is not None:
                if not isinstance(treatment, TreatmentOption):
                    treatment = parse_treatment(treatment, "treatment")
                horizon = treatment_time if treatment_time is not None else now
                extra_go = evaluate_load_and_go(first_dp, treatment, horizon)
            if routes is not None:
                extra_routes = {
                    name: ecda_transport(first_dp, dist)
                    for name, dist in self._coerce_routes(routes).items()
                }
        return Assessment(
            session_id,
            now,
            delays,
            evidence.findings,
            session.log,
            tuple(blocks),
            extra_go,
            extra_routes,
        )

    def load_and_go(
        self,
        session_id: str,
        treatment: TreatmentOption | Mapping,
        t: float,
        now: float = 0.0,
    ) -> LoadAndGoReport:
        if not isinstance(treatment, TreatmentOption):
            treatment = parse_treatment(treatment, "treatment")
        session = self.session(session_id)
        bundle = self.model(session.model_id)
        if not bundle.utilities:
            raise InputError("model declares no utilities")
        hyp = next(iter(bundle.utilities))
        post = posterior(bundle.net, hyp, session.current_evidence())
        dp = DecisionProblem(
            post, bundle.utilities[hyp], session.context, reference_time=now
        )
        return evaluate_load_and_go(dp, treatment, t)

    def transport_costs(
        self,
        session_id: str,
        routes: Mapping[str, TimeDistribution | Mapping],
        now: float = 0.0,
    ) -> dict[str, float]:
        """Expected delay cost per named route's arrival-time distribution."""
        session = self.session(session_id)
        bundle = self.model(session.model_id)
        if not bundle.utilities:
            raise InputError("model declares no utilities")
        hyp = next(iter(bundle.utilities))
        post = posterior(bundle.net, hyp, session.current_evidence())
        dp = DecisionProblem(
            post, bundle.utilities[hyp], session.context, reference_time=now
        )
        return {
            name: ecda_transport(dp, dist)
            for name, dist in self._coerce_routes(routes).items()
        }

    # -- scenarios -----------------------------------------------------------

    def evaluate_scenario(self, data: bytes | str | Mapping) -> list[PlanEvaluation]:
        definition: ScenarioDefinition = parse_scenario(data)
        plans = enumerate_plans(definition.scenario)
        if not plans:
            raise InfeasibleScenarioError(
                "no feasible plan covers every patient under the declared "
                "capacities and capability tags"
            )
        evaluations = [evaluate_plan(definition.scenario, plan) for plan in plans]
        evaluations.sort(key=lambda e: e.total)  # stable: enumeration order on ties
        return evaluations

    # -- persistence ---------------------------------------------------------

    def save_session(self, session_id: str) -> bytes:
        session = self.session(session_id)
        doc = {
            "kind": SESSION_DOC_KIND,
            "version": SESSION_DOC_VERSION,
            "id": session.id,
            "model": session.model_id,
            "origin": session.origin,
            "context": session.context,
            "onset": {"support": [[t, w] for t, w in session.onset.support]},
            "log": [[f.variable, f.state, f.timestamp] for f in session.log],
        }
        return json.dumps(doc).encode("utf-8")

    def load_session(self, data: bytes | str) -> str:
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid session payload: {exc}", "") from exc
        if not isinstance(doc, Mapping) or doc.get("kind") != SESSION_DOC_KIND:
            raise ParseError("not a session document", "kind")
        model_id = doc.get("model")
        self.model(model_id)  # must already be loaded
        try:
            onset = parse_time_distribution(doc.get("onset", 0.0), "onset")
            log = tuple(
                Finding(str(v), str(s), float(ts)) for v, s, ts in doc.get("log", [])
            )
            origin = float(doc.get("origin", 0.0))
            context = doc.get("context")
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(f"malformed session payload: {exc}", "") from exc
        with self._lock:
            session_id = doc.get("id")
            if not isinstance(session_id, str) or session_id in self._sessions:
                session_id = self._next_id("s")
            self._sessions[session_id] = Session(
                session_id, model_id, log, origin, onset, context
            )
        return session_id

"""Command-line entry points.

Every subcommand prints a single JSON document to stdout.  Exit status is
0 on success, 1 when the inputs are readable but wrong (parse, validation,
or domain errors), and 2 for usage errors raised by argparse itself.
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path
from typing import Sequence

from .bayes import Evidence, Finding, posterior, validate_network, value_of_information
from .decisions import DecisionProblem, best_action, comprehensive_ecda, ecda
from .errors import InputError, NotFoundError, TimecritError
from .files import ModelDefinition, parse_model
from .utility import TimeDistribution
from .service import DecisionService, _posterior_dict, _voi_dict, plan_evaluation_dict


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise NotFoundError(f"cannot read file: {exc}", path) from exc


def _parse_evidence(tokens: Sequence[str]) -> Evidence:
    findings = []
    for token in tokens:
        name, sep, state = token.partition("=")
        if not sep or not name or not state:
            raise InputError(f"evidence must look like variable=state, got {token!r}")
        findings.append(Finding(name, state))
    return Evidence(tuple(findings))


def _parse_onset(text: str) -> TimeDistribution:
    """Either a single elapsed time or comma-separated time:weight atoms."""
    try:
        if ":" not in text:
            return TimeDistribution.point_mass(float(text))
        atoms = []
        for part in text.split(","):
            time_part, _, weight_part = part.partition(":")
            atoms.append((float(time_part), float(weight_part)))
        return TimeDistribution(tuple(atoms))
    except ValueError as exc:
        raise InputError(f"onset must look like 30 or 0:0.5,30:0.5 ({exc})") from exc


def _pick_target(definition: ModelDefinition, target: str | None) -> str:
    if target is not None:
        if target not in definition.utilities:
            raise InputError(f"{target!r} is not a hypothesis variable with utilities")
        return target
    if not definition.utilities:
        raise InputError("model declares no utilities")
    return next(iter(definition.utilities))


def _decision_problem(
    definition: ModelDefinition,
    evidence: Evidence,
    target: str | None,
    context: str | None,
    reference_time: float,
) -> tuple[str, DecisionProblem]:
    hyp = _pick_target(definition, target)
    post = posterior(definition.net, hyp, evidence)
    return hyp, DecisionProblem(
        post, definition.utilities[hyp], context, reference_time=reference_time
    )


def _cmd_validate(args: argparse.Namespace) -> tuple[dict, int]:
    definition = parse_model(_read(args.model))
    report = validate_network(definition.net)
    payload = {
        "ok": report.ok,
        "violations": [{"path": v.path, "message": v.message} for v in report.violations],
    }
    return payload, 0 if report.ok else 1


def _cmd_infer(args: argparse.Namespace) -> tuple[dict, int]:
    definition = parse_model(_read(args.model))
    evidence = _parse_evidence(args.evidence)
    if args.target is not None:
        targets = [args.target]
    else:
        targets = list(definition.net.hypothesis_vars)
    posteriors = {
        name: _posterior_dict(posterior(definition.net, name, evidence))
        for name in targets
    }
    return {"posteriors": posteriors}, 0


def _cmd_ecda(args: argparse.Namespace) -> tuple[dict, int]:
    definition = parse_model(_read(args.model))
    evidence = _parse_evidence(args.evidence)
    hyp, dp = _decision_problem(
        definition, evidence, args.target, args.context, args.t0
    )
    action_now, eu_now = best_action(dp, args.t0)
    action_later, eu_later = best_action(dp, args.t)
    payload = {
        "hypothesis": hyp,
        "posterior": _posterior_dict(dp.posterior),
        "t0": args.t0,
        "t": args.t,
        "best_action_now": action_now,
        "expected_utility_now": eu_now,
        "best_action_at_t": action_later,
        "expected_utility_at_t": eu_later,
        "ecda": ecda(dp, args.t),
    }
    if args.onset is not None:
        payload["comprehensive_ecda"] = comprehensive_ecda(dp, _parse_onset(args.onset))
    return payload, 0


def _cmd_voi(args: argparse.Namespace) -> tuple[dict, int]:
    definition = parse_model(_read(args.model))
    evidence = _parse_evidence(args.evidence)
    hyp = _pick_target(definition, args.target)
    observed = {f.variable for f in evidence.findings}
    candidates = [
        v.name
        for v in definition.net.variables
        if v.name not in definition.net.hypothesis_vars and v.name not in observed
    ]
    report = value_of_information(
        definition.net, hyp, evidence, candidates, definition.utilities[hyp], args.t
    )
    return {"hypothesis": hyp, "voi": _voi_dict(report)}, 0


def _cmd_plan(args: argparse.Namespace) -> tuple[dict, int]:
    service = DecisionService()
    evaluations = service.evaluate_scenario(_read(args.scenario))
    return {
        "count": len(evaluations),
        "plans": [plan_evaluation_dict(e) for e in evaluations],
    }, 0


def _cmd_serve(args: argparse.Namespace) -> tuple[dict, int]:
    import uvicorn

    from .httpapi import create_app

    uvicorn.run(create_app(DecisionService()), host=args.host, port=args.port)
    return {"stopped": True}, 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="timecrit",
        description="Decision support for time-critical action under uncertainty.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a model file and report violations")
    p.add_argument("model")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("infer", help="posterior over hypothesis states given evidence")
    p.add_argument("model")
    p.add_argument("--evidence", nargs="*", default=[], metavar="VAR=STATE")
    p.add_argument("--target", default=None, help="hypothesis variable to query")
    p.set_defaults(handler=_cmd_infer)

    p = sub.add_parser("ecda", help="expected cost of delaying action until t")
    p.add_argument("model")
    p.add_argument("--evidence", nargs="*", default=[], metavar="VAR=STATE")
    p.add_argument("--t", type=float, required=True, help="delayed action time")
    p.add_argument("--t0", type=float, default=0.0, help="earliest action time")
    p.add_argument(
        "--onset",
        default=None,
        help="elapsed-duration belief, e.g. 30 or 0:0.5,30:0.5",
    )
    p.add_argument("--target", default=None)
    p.add_argument("--context", default=None)
    p.set_defaults(handler=_cmd_ecda)

    p = sub.add_parser("voi", help="rank unobserved findings by value of information")
    p.add_argument("model")
    p.add_argument("--evidence", nargs="*", default=[], metavar="VAR=STATE")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--target", default=None)
    p.set_defaults(handler=_cmd_voi)

    p = sub.add_parser("plan", help="enumerate and rank transport plans")
    p.add_argument("scenario")
    p.set_defaults(handler=_cmd_plan)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        payload, status = args.handler(args)
    except TimecritError as exc:
        print(json.dumps({"code": exc.code, "message": exc.message, "path": exc.path}))
        return 1
    print(json.dumps(payload, indent=2))
    return status


def run() -> None:
    raise SystemExit(main())

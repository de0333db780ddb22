"""Decision support for time-critical action under uncertainty.

The package separates belief from value: discrete Bayesian networks give
posteriors over hypotheses, time-dependent utility models price actions,
and the decision layer turns the two into delay costs, treatment
trade-offs, and ranked transport plans.
"""

from .bayes import (
    BayesNet,
    Evidence,
    Finding,
    Posterior,
    ValidationReport,
    Variable,
    Violation,
    VoiEntry,
    VoiOutcome,
    VoiReport,
    brute_force_posterior,
    posterior,
    validate_network,
    value_of_information,
)
from .decisions import (
    DEFAULT_CRITICALITY_STEP,
    DecisionProblem,
    LoadAndGoReport,
    PointMassPredictor,
    SoftmaxPredictor,
    TimeRemoved,
    TreatmentOption,
    UniformPredictor,
    action_distribution,
    best_action,
    comprehensive_ecda,
    criticality,
    ecda,
    ecda_transport,
    ecda_with_duration_uncertainty,
    ecdm,
    evaluate_load_and_go,
)
from .errors import (
    EnumerationLimitError,
    ImpossibleEvidenceError,
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
    parse_curve,
    parse_model,
    parse_scenario,
    parse_time_distribution,
    parse_treatment,
)
from .planning import (
    MAX_ASSETS,
    MAX_FACILITIES,
    MAX_PATIENTS,
    Asset,
    Facility,
    PatientCase,
    PlanEvaluation,
    Scenario,
    TransportModel,
    TransportPlan,
    best_plan,
    enumerate_plans,
    evaluate_plan,
)
from .service import (
    DEFAULT_DELAY_GRID,
    Assessment,
    DecisionService,
    HypothesisAssessment,
    ModelBundle,
    Session,
    ValidationFailure,
)
from .utility import (
    Constant,
    ExponentialUrgency,
    HardDeadline,
    LinearUrgency,
    PiecewiseLinear,
    TimeDistribution,
    UncertainDeadline,
    UtilityModel,
    convolve,
    eval_curve,
    eval_utility,
    expected_utility,
)

__version__ = "0.1.0"

__all__ = [
    "Asset",
    "Assessment",
    "BayesNet",
    "Constant",
    "DEFAULT_CRITICALITY_STEP",
    "DEFAULT_DELAY_GRID",
    "DecisionProblem",
    "DecisionService",
    "EnumerationLimitError",
    "Evidence",
    "ExponentialUrgency",
    "Facility",
    "Finding",
    "HardDeadline",
    "HypothesisAssessment",
    "ImpossibleEvidenceError",
    "InfeasibleScenarioError",
    "InputError",
    "LinearUrgency",
    "LoadAndGoReport",
    "MAX_ASSETS",
    "MAX_FACILITIES",
    "MAX_PATIENTS",
    "ModelBundle",
    "ModelDefinition",
    "NotFoundError",
    "ParseError",
    "PatientCase",
    "PiecewiseLinear",
    "PlanEvaluation",
    "PointMassPredictor",
    "Posterior",
    "Scenario",
    "ScenarioDefinition",
    "Session",
    "SoftmaxPredictor",
    "TimeDistribution",
    "TimecritError",
    "TimeRemoved",
    "TransportModel",
    "TransportPlan",
    "TreatmentOption",
    "UncertainDeadline",
    "UniformPredictor",
    "UtilityModel",
    "ValidationFailure",
    "ValidationReport",
    "Variable",
    "Violation",
    "VoiEntry",
    "VoiOutcome",
    "VoiReport",
    "action_distribution",
    "best_action",
    "best_plan",
    "brute_force_posterior",
    "comprehensive_ecda",
    "convolve",
    "criticality",
    "dump_model",
    "ecda",
    "ecda_transport",
    "ecda_with_duration_uncertainty",
    "ecdm",
    "enumerate_plans",
    "eval_curve",
    "eval_utility",
    "evaluate_load_and_go",
    "evaluate_plan",
    "expected_utility",
    "parse_curve",
    "parse_model",
    "parse_scenario",
    "parse_time_distribution",
    "parse_treatment",
    "posterior",
    "validate_network",
    "value_of_information",
    "__version__",
]

"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` and an optional
``path`` locating the offending field (dotted, e.g. ``"cpts.hypotension"``),
which the service layer serializes verbatim.
"""

from __future__ import annotations


class TimecritError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str, path: str = ""):
        super().__init__(message)
        self.message = message
        self.path = path


class InputError(TimecritError):
    """A caller-supplied value violates an operation's contract."""

    code = "invalid_input"


class ParseError(TimecritError):
    """A model, scenario, or session document cannot be decoded."""

    code = "parse_error"


class NotFoundError(TimecritError):
    """An id (model, session) or table key does not exist."""

    code = "not_found"


class ImpossibleEvidenceError(TimecritError):
    """The observed evidence has zero probability under the network."""

    code = "impossible_evidence"


class EnumerationLimitError(TimecritError):
    """A brute-force operation would exceed its hard size bound."""

    code = "enumeration_limit"


class InfeasibleScenarioError(TimecritError):
    """No transport plan satisfies the scenario's constraints."""

    code = "infeasible_scenario"

"""Discrete Bayesian networks: exact diagnosis posteriors and finding VOI.

Networks are immutable after construction and all operations here are pure
functions, so they are safe to share across threads.  ``posterior`` runs
variable elimination; ``brute_force_posterior`` sums the explicit joint and
exists as an independent cross-check, so the two must never share factor
machinery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    EnumerationLimitError,
    ImpossibleEvidenceError,
    InputError,
)
from .utility import UtilityModel, expected_utility

_SUM_TOL = 1e-9
_BRUTE_FORCE_LIMIT = 2**20


# ---------------------------------------------------------------------------
# Network, evidence, posterior types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Variable:
    name: str
    states: tuple[str, ...]

    def __post_init__(self):
        if not self.states:
            raise InputError(f"variable {self.name!r} has no states")
        if len(set(self.states)) != len(self.states):
            raise InputError(f"variable {self.name!r} has duplicate states")


@dataclass(frozen=True)
class BayesNet:
    """Variables, parent edges, and one CPT array per variable.

    CPT arrays are indexed ``table[parent_1_state, ..., parent_k_state, own_state]``
    with parents in edge-declaration order.  Construction is permissive about
    probabilistic validity (row sums, shapes): ``validate_network`` reports
    those as data, so broken models can be loaded, inspected, and rejected
    with precise paths.
    """

    variables: tuple[Variable, ...]
    edges: tuple[tuple[str, str], ...]
    cpts: Mapping[str, np.ndarray]
    hypothesis_vars: tuple[str, ...] = ()

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(set(names)) != len(names):
            raise InputError("duplicate variable names")
        index = {name: i for i, name in enumerate(names)}
        for parent, child in self.edges:
            for end in (parent, child):
                if end not in index:
                    raise InputError(f"edge references unknown variable {end!r}")
        parents: dict[str, list[str]] = {name: [] for name in names}
        for parent, child in self.edges:
            parents[child].append(parent)
        object.__setattr__(self, "_index", index)
        object.__setattr__(
            self, "_parents", {k: tuple(v) for k, v in parents.items()}
        )
        object.__setattr__(
            self,
            "cpts",
            {k: np.asarray(v, dtype=float) for k, v in self.cpts.items()},
        )

    # -- structural lookups -------------------------------------------------

    def variable(self, name: str) -> Variable:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise InputError(f"unknown variable {name!r}") from None

    def states(self, name: str) -> tuple[str, ...]:
        return self.variable(name).states

    def parents(self, name: str) -> tuple[str, ...]:
        self.variable(name)
        return self._parents[name]

    def state_index(self, name: str, state: str) -> int:
        states = self.states(name)
        try:
            return states.index(state)
        except ValueError:
            raise InputError(
                f"unknown state {state!r} for variable {name!r} (states: {states})"
            ) from None

    @classmethod
    def build(
        cls,
        variables: Sequence[Variable | tuple[str, Sequence[str]]],
        edges: Sequence[tuple[str, str]] = (),
        cpts: Mapping[str, object] | None = None,
        hypothesis: Sequence[str] = (),
    ) -> "BayesNet":
        """Assemble a net from rows keyed by parent states.

        A root variable's table is a plain probability list; a child's is a
        mapping from a parent state (or tuple of parent states, in edge
        order) to its row.
        """
        vars_ = tuple(
            v if isinstance(v, Variable) else Variable(v[0], tuple(v[1]))
            for v in variables
        )
        by_name = {v.name: v for v in vars_}
        parent_map: dict[str, list[str]] = {v.name: [] for v in vars_}
        for parent, child in edges:
            if child in parent_map:
                parent_map[child].append(parent)
        arrays: dict[str, np.ndarray] = {}
        for name, spec in (cpts or {}).items():
            if name not in by_name:
                raise InputError(f"CPT for unknown variable {name!r}")
            parents = parent_map[name]
            card = len(by_name[name].states)
            if not parents:
                arrays[name] = np.asarray(spec, dtype=float)
                continue
            if not isinstance(spec, Mapping):
                raise InputError(
                    f"CPT for {name!r} must map parent states to rows"
                )
            shape = [len(by_name[p].states) for p in parents if p in by_name]
            table = np.full(shape + [card], np.nan)
            for key, row in spec.items():
                key_tuple = (key,) if isinstance(key, str) else tuple(key)
                if len(key_tuple) != len(parents):
                    raise InputError(
                        f"CPT row key {key!r} for {name!r} needs one state per parent "
                        f"{tuple(parents)}"
                    )
                idx = []
                for parent, state in zip(parents, key_tuple):
                    pstates = by_name[parent].states
                    if state not in pstates:
                        raise InputError(
                            f"CPT row key for {name!r} uses unknown state {state!r} "
                            f"of parent {parent!r}"
                        )
                    idx.append(pstates.index(state))
                table[tuple(idx)] = np.asarray(row, dtype=float)
            if np.isnan(table).any():
                raise InputError(f"CPT for {name!r} is missing parent-state rows")
            arrays[name] = table
        return cls(vars_, tuple(edges), arrays, tuple(hypothesis))


@dataclass(frozen=True)
class Finding:
    """One observed variable state, stamped in session-clock minutes."""

    variable: str
    state: str
    timestamp: float = 0.0


@dataclass(frozen=True)
class Evidence:
    findings: tuple[Finding, ...] = ()

    def __post_init__(self):
        seen = set()
        for f in self.findings:
            if f.variable in seen:
                raise InputError(f"variable {f.variable!r} observed more than once")
            seen.add(f.variable)

    @classmethod
    def of(cls, **assignments: str) -> "Evidence":
        return cls(tuple(Finding(v, s) for v, s in assignments.items()))

    def states(self) -> dict[str, str]:
        return {f.variable: f.state for f in self.findings}

    def observed(self, variable: str) -> bool:
        return any(f.variable == variable for f in self.findings)

    def extended(self, variable: str, state: str, timestamp: float = 0.0) -> "Evidence":
        return Evidence(self.findings + (Finding(variable, state, timestamp),))


@dataclass(frozen=True)
class Posterior:
    """Distribution over one variable's states, in declaration order."""

    variable: str
    states: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.states) != len(self.weights):
            raise InputError("posterior weights do not match states")
        if any(w < -_SUM_TOL or w > 1 + _SUM_TOL for w in self.weights):
            raise InputError("posterior weights must lie in [0, 1]")
        total = math.fsum(self.weights)
        if abs(total - 1.0) > _SUM_TOL:
            raise InputError(f"posterior weights sum to {total!r}, not 1")

    @classmethod
    def point_mass(cls, variable: str, states: Sequence[str], state: str) -> "Posterior":
        if state not in states:
            raise InputError(f"state {state!r} not among {tuple(states)}")
        return cls(
            variable,
            tuple(states),
            tuple(1.0 if s == state else 0.0 for s in states),
        )

    def prob(self, state: str) -> float:
        try:
            return self.weights[self.states.index(state)]
        except ValueError:
            raise InputError(f"unknown state {state!r}") from None

    def ranked(self) -> tuple[tuple[str, float], ...]:
        """States sorted by weight descending; declaration order breaks ties."""
        order = sorted(range(len(self.states)), key=lambda i: (-self.weights[i], i))
        return tuple((self.states[i], self.weights[i]) for i in order)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]


def _find_cycle(net: BayesNet) -> list[str] | None:
    """Return one directed cycle as a name list, or None if acyclic."""
    children: dict[str, list[str]] = {v.name: [] for v in net.variables}
    for parent, child in net.edges:
        children[parent].append(child)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {v.name: WHITE for v in net.variables}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GREY
        stack.append(node)
        for child in children[node]:
            if color[child] == GREY:
                return stack[stack.index(child):] + [child]
            if color[child] == WHITE:
                found = visit(child)
                if found:
                    return found
        stack.pop()
        color[node] = BLACK
        return None

    for v in net.variables:
        if color[v.name] == WHITE:
            found = visit(v.name)
            if found:
                return found
    return None


def validate_network(net: BayesNet) -> ValidationReport:
    """Check every structural invariant; violations are data, not faults."""
    violations: list[Violation] = []

    cycle = _find_cycle(net)
    if cycle:
        violations.append(
            Violation("edges", "cycle: " + " -> ".join(cycle))
        )

    for hyp in net.hypothesis_vars:
        if not any(v.name == hyp for v in net.variables):
            violations.append(
                Violation("hypothesis", f"unknown hypothesis variable {hyp!r}")
            )

    for var in net.variables:
        name = var.name
        if name not in net.cpts:
            violations.append(Violation(f"cpts.{name}", "missing CPT"))
            continue
        table = net.cpts[name]
        card = len(var.states)
        expected_rows = 1
        for parent in net.parents(name):
            expected_rows *= len(net.states(parent))
        if table.size != expected_rows * card:
            violations.append(
                Violation(
                    f"cpts.{name}",
                    f"table has {table.size} entries; expected "
                    f"{expected_rows} rows x {card} states",
                )
            )
            continue
        rows = table.reshape(expected_rows, card)
        parent_states = [net.states(p) for p in net.parents(name)]
        for row_idx in range(expected_rows):
            key = ",".join(
                states[i]
                for states, i in zip(
                    parent_states, np.unravel_index(row_idx, [len(s) for s in parent_states])
                )
            ) if parent_states else ""
            row = rows[row_idx]
            label = f"cpts.{name}[{key}]"
            if (row < 0).any():
                violations.append(Violation(label, "negative probability entry"))
            total = float(row.sum())
            if abs(total - 1.0) > _SUM_TOL:
                violations.append(
                    Violation(label, f"row sums to {total!r}, not 1")
                )

    for extra in set(net.cpts) - {v.name for v in net.variables}:
        violations.append(Violation(f"cpts.{extra}", "CPT for unknown variable"))

    return ValidationReport(not violations, tuple(sorted(violations, key=lambda v: v.path)))


def _check_evidence(net: BayesNet, evidence: Evidence) -> dict[str, int]:
    observed: dict[str, int] = {}
    for f in evidence.findings:
        observed[f.variable] = net.state_index(f.variable, f.state)
    return observed


# ---------------------------------------------------------------------------
# Exact inference by variable elimination
# ---------------------------------------------------------------------------


class _Factor:
    __slots__ = ("names", "table")

    def __init__(self, names: tuple[str, ...], table: np.ndarray):
        self.names = names
        self.table = table


def _expand(names: tuple[str, ...], table: np.ndarray, union: Sequence[str]) -> np.ndarray:
    present = [n for n in union if n in names]
    perm = [names.index(n) for n in present]
    transposed = np.transpose(table, perm)
    shape = []
    k = 0
    for n in union:
        if n in names:
            shape.append(transposed.shape[k])
            k += 1
        else:
            shape.append(1)
    return transposed.reshape(shape)


def _multiply(a: _Factor, b: _Factor) -> _Factor:
    union = tuple(a.names) + tuple(n for n in b.names if n not in a.names)
    return _Factor(union, _expand(a.names, a.table, union) * _expand(b.names, b.table, union))


def _sum_out(f: _Factor, name: str) -> _Factor:
    axis = f.names.index(name)
    return _Factor(f.names[:axis] + f.names[axis + 1:], f.table.sum(axis=axis))


def _reduce(f: _Factor, name: str, state_idx: int) -> _Factor:
    axis = f.names.index(name)
    return _Factor(f.names[:axis] + f.names[axis + 1:], np.take(f.table, state_idx, axis=axis))


def _min_degree_order(scopes: list[set[str]], to_remove: list[str], rank: Mapping[str, int]) -> list[str]:
    """Greedy elimination order: fewest interaction-graph neighbors first."""
    neighbors: dict[str, set[str]] = {v: set() for v in to_remove}
    for scope in scopes:
        for v in scope:
            if v in neighbors:
                neighbors[v].update(scope - {v})
    order = []
    remaining = set(to_remove)
    while remaining:
        pick = min(remaining, key=lambda v: (len(neighbors[v] & remaining), rank[v]))
        remaining.discard(pick)
        linked = neighbors[pick] & remaining
        for v in linked:
            neighbors[v].update(linked - {v})
        order.append(pick)
    return order


def posterior(net: BayesNet, target: str, evidence: Evidence | None = None) -> Posterior:
    """Exact p(target | evidence) by variable elimination.

    Raises ``ImpossibleEvidenceError`` when the evidence has zero joint
    probability; an observed target degenerates to a point mass.
    """
    evidence = evidence or Evidence()
    states = net.states(target)
    observed = _check_evidence(net, evidence)

    if target in observed:
        rest = Evidence(tuple(f for f in evidence.findings if f.variable != target))
        marginal = posterior(net, target, rest)
        state = evidence.states()[target]
        if marginal.prob(state) <= 0.0:
            raise ImpossibleEvidenceError(
                f"evidence {evidence.states()!r} has zero probability"
            )
        return Posterior.point_mass(target, states, state)

    factors: list[_Factor] = []
    for var in net.variables:
        names = net.parents(var.name) + (var.name,)
        f = _Factor(names, net.cpts[var.name])
        for name in names:
            if name in observed:
                f = _reduce(f, name, observed[name])
        factors.append(f)

    rank = {v.name: i for i, v in enumerate(net.variables)}
    hidden = [
        v.name
        for v in net.variables
        if v.name != target and v.name not in observed
    ]
    order = _min_degree_order([set(f.names) for f in factors], hidden, rank)

    for name in order:
        involved = [f for f in factors if name in f.names]
        if not involved:
            continue
        product = involved[0]
        for f in involved[1:]:
            product = _multiply(product, f)
        factors = [f for f in factors if name not in f.names]
        factors.append(_sum_out(product, name))

    result = _Factor((), np.array(1.0))
    for f in factors:
        result = _multiply(result, f)
    weights = result.table if result.names == (target,) else result.table.reshape(-1)
    normalizer = float(weights.sum())
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(
            f"evidence {evidence.states()!r} has zero probability"
        )
    return Posterior(target, states, tuple(float(w) for w in weights / normalizer))


# ---------------------------------------------------------------------------
# Brute-force oracle: explicit joint enumeration
# ---------------------------------------------------------------------------


def brute_force_posterior(net: BayesNet, target: str, evidence: Evidence | None = None) -> Posterior:
    """p(target | evidence) by summing the full joint; reference semantics.

    Deliberately avoids the factor machinery above: probabilities come from
    per-assignment CPT lookups over flattened tables.  Refuses joints larger
    than 2**20 entries.
    """
    evidence = evidence or Evidence()
    states = net.states(target)
    observed = _check_evidence(net, evidence)

    cards = [len(v.states) for v in net.variables]
    joint_size = 1
    for c in cards:
        joint_size *= c
    if joint_size > _BRUTE_FORCE_LIMIT:
        raise EnumerationLimitError(
            f"joint table of {joint_size} entries exceeds the {_BRUTE_FORCE_LIMIT} bound"
        )

    index = {v.name: i for i, v in enumerate(net.variables)}
    target_idx = index[target]
    # Flatten each CPT to a row-major list plus strides over (parents..., self).
    lookups = []
    for i, var in enumerate(net.variables):
        axes = [index[p] for p in net.parents(var.name)] + [i]
        table = np.asarray(net.cpts[var.name], dtype=float).reshape(-1)
        strides = []
        stride = 1
        for axis in reversed(axes):
            strides.append((axis, stride))
            stride *= cards[axis]
        lookups.append((table.tolist(), strides))

    assignment = [0] * len(cards)
    for var, state_idx in observed.items():
        assignment[index[var]] = state_idx
    free = [i for i in range(len(cards)) if net.variables[i].name not in observed]

    totals = [0.0] * len(states)
    for combo in itertools.product(*(range(cards[i]) for i in free)):
        for pos, value in zip(free, combo):
            assignment[pos] = value
        p = 1.0
        for table, strides in lookups:
            flat = 0
            for axis, stride in strides:
                flat += assignment[axis] * stride
            p *= table[flat]
            if p == 0.0:
                break
        totals[assignment[target_idx]] += p

    normalizer = math.fsum(totals)
    if normalizer <= 0.0:
        raise ImpossibleEvidenceError(
            f"evidence {evidence.states()!r} has zero probability"
        )
    return Posterior(target, states, tuple(w / normalizer for w in totals))


# ---------------------------------------------------------------------------
# Myopic value of information over unobserved findings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VoiOutcome:
    state: str
    probability: float
    best_action: str
    expected_utility: float


@dataclass(frozen=True)
class VoiEntry:
    variable: str
    evi: float
    observed: bool
    outcomes: tuple[VoiOutcome, ...]


@dataclass(frozen=True)
class VoiReport:
    time: float
    entries: tuple[VoiEntry, ...]

    def top(self) -> VoiEntry | None:
        return self.entries[0] if self.entries else None


def _best(post: Posterior, model: UtilityModel, t: float) -> tuple[str, float]:
    if not model.actions:
        raise InputError("utility model declares no actions")
    best_action, best_eu = None, -math.inf
    for action in model.actions:
        eu = expected_utility(post, model, action, t)
        if eu > best_eu:
            best_action, best_eu = action, eu
    return best_action, best_eu


def value_of_information(
    net: BayesNet,
    target: str,
    evidence: Evidence,
    candidates: Iterable[str],
    model: UtilityModel,
    t: float,
) -> VoiReport:
    """Single-step expected value of observing each candidate before acting.

    EVI(O) = sum_o p(o|E) max_A EU(A | E + {O=o}, t)  -  max_A EU(A | E, t).
    Zero observation cost; already-observed candidates are flagged with EVI 0
    rather than rejected.  Entries come back sorted by EVI descending, ties
    alphabetically.
    """
    if t < 0:
        raise InputError(f"decision time must be >= 0, got {t!r}")
    base_post = posterior(net, target, evidence)
    _, base_eu = _best(base_post, model, t)

    entries: list[VoiEntry] = []
    for candidate in candidates:
        net.variable(candidate)  # raises on unknown names
        if evidence.observed(candidate):
            entries.append(VoiEntry(candidate, 0.0, True, ()))
            continue
        outcome_post = posterior(net, candidate, evidence)
        outcomes: list[VoiOutcome] = []
        weighted = 0.0
        for state, prob in zip(outcome_post.states, outcome_post.weights):
            if prob <= 0.0:
                continue
            updated = posterior(net, target, evidence.extended(candidate, state))
            action, eu = _best(updated, model, t)
            outcomes.append(VoiOutcome(state, prob, action, eu))
            weighted += prob * eu
        entries.append(VoiEntry(candidate, weighted - base_eu, False, tuple(outcomes)))

    entries.sort(key=lambda e: (-e.evi, e.variable))
    return VoiReport(t, tuple(entries))

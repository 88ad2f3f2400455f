"""Scenario types, validation and the JSON scenario format.

A scenario is a finite world model: agents, world states, a value table
``v(agent, state)``, per-agent capabilities (partial state maps) and social
procedures that a set of beneficiaries may use.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Any, Mapping

TOKEN_RE = re.compile(r"^[A-Za-z0-9_-]+$")

_TOP_KEYS = {"agents", "states", "values", "capabilities", "procedures", "factor_spec"}
_REQUIRED_KEYS = ("agents", "states", "values")


class ScenarioError(ValueError):
    """Base class for scenario load failures."""


class ScenarioParseError(ScenarioError):
    """The text is not a well-formed scenario document."""


class ScenarioValidationError(ScenarioError):
    """The document parsed but breaks a scenario invariant."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownNameError(LookupError):
    """An agent, state, capability or procedure name does not resolve."""

    def __init__(self, kind: str, name: str):
        self.kind = kind
        self.name = name
        super().__init__(f"unknown {kind} {name!r}")

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class WorldState:
    id: str
    labels: tuple[str, ...] = ()


@dataclass(frozen=True)
class Capability:
    name: str
    owner: str
    transitions: Mapping[str, str]

    def apply(self, state: str) -> str:
        # states outside the explicit map are fixed points
        return self.transitions.get(state, state)


@dataclass(frozen=True)
class SocialProcedure:
    name: str
    transitions: Mapping[str, str]
    beneficiaries: tuple[str, ...]

    def apply(self, state: str) -> str:
        return self.transitions.get(state, state)


@dataclass(frozen=True)
class FactorSpec:
    arity: int
    separator: str

    def split(self, state_id: str) -> tuple[str, ...]:
        parts = tuple(state_id.split(self.separator))
        if len(parts) != self.arity or not all(parts):
            raise ValueError(
                f"state {state_id!r} does not split into {self.arity} coordinates "
                f"on {self.separator!r}"
            )
        return parts

    def join(self, coords) -> str:
        return self.separator.join(coords)


@dataclass(frozen=True)
class Scenario:
    """An immutable world model.

    ``values`` maps agent -> state -> value.  Treat every mapping as
    read-only; derived scenarios are built with :func:`dataclasses.replace`.
    """

    agents: tuple[str, ...]
    states: tuple[WorldState, ...]
    values: Mapping[str, Mapping[str, float]]
    capabilities: tuple[Capability, ...] = ()
    procedures: tuple[SocialProcedure, ...] = ()
    factor_spec: FactorSpec | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    @property
    def state_ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.states)

    def _lookup(self) -> dict:
        if self._index is None:
            index = {
                "caps": {c.name: c for c in self.capabilities},
                "procs": {p.name: p for p in self.procedures},
                "states": {s.id for s in self.states},
            }
            object.__setattr__(self, "_index", index)
        return self._index

    def require_agent(self, agent: str) -> None:
        if agent not in self.agents:
            raise UnknownNameError("agent", agent)

    def require_state(self, state: str) -> None:
        if state not in self._lookup()["states"]:
            raise UnknownNameError("state", state)

    def capability(self, name: str) -> Capability:
        try:
            return self._lookup()["caps"][name]
        except KeyError:
            raise UnknownNameError("capability", name) from None

    def procedure(self, name: str) -> SocialProcedure:
        try:
            return self._lookup()["procs"][name]
        except KeyError:
            raise UnknownNameError("procedure", name) from None

    def capabilities_of(self, agent: str) -> tuple[Capability, ...]:
        return tuple(c for c in self.capabilities if c.owner == agent)

    def value(self, agent: str, state: str) -> float:
        self.require_agent(agent)
        self.require_state(state)
        return self.values[agent][state]


def validate(scenario: Scenario) -> list[str]:
    """Return one message per broken invariant; empty means valid."""
    problems: list[str] = []

    seen: set[str] = set()
    for agent in scenario.agents:
        if not isinstance(agent, str) or not TOKEN_RE.match(agent):
            problems.append(f"agent {agent!r}: id must match [A-Za-z0-9_-]+")
        if agent in seen:
            problems.append(f"agent {agent!r}: duplicate id")
        seen.add(agent)
    agents = set(scenario.agents)

    seen = set()
    for state in scenario.states:
        if not isinstance(state.id, str) or not TOKEN_RE.match(state.id):
            problems.append(f"state {state.id!r}: id must match [A-Za-z0-9_-]+")
        if state.id in seen:
            problems.append(f"state {state.id!r}: duplicate id")
        seen.add(state.id)
    states = seen

    for agent in scenario.agents:
        row = scenario.values.get(agent)
        if row is None:
            problems.append(f"values: missing row for agent {agent!r}")
            continue
        for sid in scenario.state_ids:
            if sid not in row:
                problems.append(f"values[{agent!r}]: missing entry for state {sid!r}")
            elif not _is_finite_number(row[sid]):
                problems.append(f"values[{agent!r}][{sid!r}]: value {row[sid]!r} is not finite")
    for agent, row in scenario.values.items():
        if agent not in agents:
            problems.append(f"values: undeclared agent {agent!r}")
            continue
        for sid in row:
            if sid not in states:
                problems.append(f"values[{agent!r}]: undeclared state {sid!r}")

    names: set[str] = set()
    for cap in scenario.capabilities:
        where = f"capability {cap.name!r}"
        if not cap.name:
            problems.append("capability: empty name")
        if cap.name in names:
            problems.append(f"{where}: duplicate name")
        names.add(cap.name)
        if cap.owner not in agents:
            problems.append(f"{where}: owner {cap.owner!r} is not a declared agent")
        problems.extend(_check_transitions(where, cap.transitions, states))

    for proc in scenario.procedures:
        where = f"procedure {proc.name!r}"
        if not proc.name:
            problems.append("procedure: empty name")
        if proc.name in names:
            problems.append(f"{where}: name already used by a capability or procedure")
        names.add(proc.name)
        if not proc.beneficiaries:
            problems.append(f"{where}: beneficiaries must be non-empty")
        for agent in proc.beneficiaries:
            if agent not in agents:
                problems.append(f"{where}: beneficiary {agent!r} is not a declared agent")
        problems.extend(_check_transitions(where, proc.transitions, states))

    spec = scenario.factor_spec
    if spec is not None:
        if spec.arity != len(scenario.agents):
            problems.append(
                f"factor_spec: arity {spec.arity} must equal the number of agents "
                f"({len(scenario.agents)})"
            )
        elif not spec.separator:
            problems.append("factor_spec: separator must be non-empty")
        else:
            for sid in scenario.state_ids:
                try:
                    spec.split(sid)
                except ValueError:
                    problems.append(
                        f"state {sid!r}: does not parse as a {spec.arity}-tuple "
                        f"separated by {spec.separator!r}"
                    )
    return problems


def _is_finite_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _check_transitions(where: str, transitions: Mapping[str, str], states: set[str]) -> list[str]:
    out = []
    for src, dst in transitions.items():
        if src not in states:
            out.append(f"{where}: transition source {src!r} is not a declared state")
        if dst not in states:
            out.append(f"{where}: transition target {dst!r} is not a declared state")
    return out


# -- file format -------------------------------------------------------------


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioParseError(message)


def _string_list(raw: Any, label: str) -> tuple[str, ...]:
    _expect(isinstance(raw, list), f"{label} must be an array of strings")
    _expect(all(isinstance(x, str) for x in raw), f"{label} must be an array of strings")
    return tuple(raw)


def _transitions(raw: Any, label: str) -> dict[str, str]:
    _expect(isinstance(raw, dict), f"{label}.transitions must be an object")
    for k, v in raw.items():
        _expect(isinstance(v, str), f"{label}.transitions[{k!r}] must be a state id")
    return dict(raw)


def _reject_unknown(obj: dict, allowed: set[str], label: str) -> None:
    extra = sorted(set(obj) - allowed)
    _expect(not extra, f"{label}: unknown key(s) {', '.join(map(repr, extra))}")


def parse_scenario(text: str) -> Scenario:
    """Parse scenario JSON into a :class:`Scenario` without checking invariants."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"malformed JSON: {exc}") from None
    _expect(isinstance(doc, dict), "scenario must be a JSON object")
    _reject_unknown(doc, _TOP_KEYS, "scenario")
    for key in _REQUIRED_KEYS:
        _expect(key in doc, f"scenario: missing required key {key!r}")

    agents = _string_list(doc["agents"], "agents")

    _expect(isinstance(doc["states"], list), "states must be an array")
    states = []
    for i, raw in enumerate(doc["states"]):
        label = f"states[{i}]"
        _expect(isinstance(raw, dict), f"{label} must be an object")
        _reject_unknown(raw, {"id", "labels"}, label)
        _expect(isinstance(raw.get("id"), str), f"{label}.id must be a string")
        labels = _string_list(raw.get("labels", []), f"{label}.labels")
        states.append(WorldState(raw["id"], labels))

    _expect(isinstance(doc["values"], dict), "values must be an object")
    values: dict[str, dict[str, float]] = {}
    for agent, row in doc["values"].items():
        _expect(isinstance(row, dict), f"values[{agent!r}] must be an object")
        for sid, x in row.items():
            _expect(
                isinstance(x, (int, float)) and not isinstance(x, bool),
                f"values[{agent!r}][{sid!r}] must be a number",
            )
        values[agent] = {sid: float(x) for sid, x in row.items()}

    caps = []
    raw_caps = doc.get("capabilities", [])
    _expect(isinstance(raw_caps, list), "capabilities must be an array")
    for i, raw in enumerate(raw_caps):
        label = f"capabilities[{i}]"
        _expect(isinstance(raw, dict), f"{label} must be an object")
        _reject_unknown(raw, {"name", "owner", "transitions"}, label)
        _expect(isinstance(raw.get("name"), str), f"{label}.name must be a string")
        _expect(isinstance(raw.get("owner"), str), f"{label}.owner must be a string")
        caps.append(Capability(raw["name"], raw["owner"], _transitions(raw.get("transitions", {}), label)))

    procs = []
    raw_procs = doc.get("procedures", [])
    _expect(isinstance(raw_procs, list), "procedures must be an array")
    for i, raw in enumerate(raw_procs):
        label = f"procedures[{i}]"
        _expect(isinstance(raw, dict), f"{label} must be an object")
        _reject_unknown(raw, {"name", "beneficiaries", "transitions"}, label)
        _expect(isinstance(raw.get("name"), str), f"{label}.name must be a string")
        procs.append(
            SocialProcedure(
                raw["name"],
                _transitions(raw.get("transitions", {}), label),
                _string_list(raw.get("beneficiaries", []), f"{label}.beneficiaries"),
            )
        )

    spec = None
    if "factor_spec" in doc:
        raw = doc["factor_spec"]
        _expect(isinstance(raw, dict), "factor_spec must be an object")
        _reject_unknown(raw, {"arity", "separator"}, "factor_spec")
        arity, sep = raw.get("arity"), raw.get("separator")
        _expect(isinstance(arity, int) and not isinstance(arity, bool) and arity >= 1,
                "factor_spec.arity must be a positive integer")
        _expect(isinstance(sep, str), "factor_spec.separator must be a string")
        spec = FactorSpec(arity, sep)

    return Scenario(tuple(agents), tuple(states), values, tuple(caps), tuple(procs), spec)


def load_scenario(text: str) -> Scenario:
    """Parse and validate scenario JSON.

    Raises :class:`ScenarioParseError` for malformed documents and
    :class:`ScenarioValidationError` (carrying every violation) for
    dangling references, duplicate ids or non-finite values.
    """
    scenario = parse_scenario(text)
    problems = validate(scenario)
    if problems:
        raise ScenarioValidationError(problems)
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    doc: dict[str, Any] = {
        "agents": list(scenario.agents),
        "states": [{"id": s.id, "labels": list(s.labels)} for s in scenario.states],
        "values": {a: dict(row) for a, row in scenario.values.items()},
        "capabilities": [
            {"name": c.name, "owner": c.owner, "transitions": dict(c.transitions)}
            for c in scenario.capabilities
        ],
        "procedures": [
            {"name": p.name, "beneficiaries": list(p.beneficiaries), "transitions": dict(p.transitions)}
            for p in scenario.procedures
        ],
    }
    if scenario.factor_spec is not None:
        doc["factor_spec"] = {
            "arity": scenario.factor_spec.arity,
            "separator": scenario.factor_spec.separator,
        }
    return doc


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"

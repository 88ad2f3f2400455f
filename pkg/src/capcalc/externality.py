"""Cross-agent effects of capability use.

An externality is a change in one agent's local value caused by another
agent applying a capability.  The independence condition holds when there
are none.  Product-world factorization (each agent owning one coordinate of
the state, with values and capabilities confined to it) is a stronger,
structural condition that implies independence.
"""

from __future__ import annotations

from dataclasses import dataclass

from capcalc import welfare
from capcalc.model import Scenario


@dataclass(frozen=True)
class ExternalityRecord:
    actor: str
    capability: str
    state: str
    affected: str
    delta: float

    @property
    def sign(self) -> str:
        if self.delta > 0:
            return "positive"
        if self.delta < 0:
            return "negative"
        return "none"


@dataclass(frozen=True)
class IndependenceVerdict:
    holds: bool
    violations: tuple[ExternalityRecord, ...]


@dataclass(frozen=True)
class FactorViolation:
    rule: str  # "value-locality" or "capability-locality"
    agent: str
    states: tuple[str, str]
    capability: str | None = None
    detail: str = ""


@dataclass(frozen=True)
class FactorizationVerdict:
    holds: bool
    violations: tuple[FactorViolation, ...]


@dataclass(frozen=True)
class TransferReport:
    capability: str
    actor: str
    state: str
    result: str
    deltas: dict[str, float]
    aggregator: str
    aggregate: float
    losers: tuple[str, ...]

    @property
    def improving_despite_loser(self) -> bool:
        return bool(self.losers) and self.aggregate > 0


def externality_report(scenario: Scenario) -> list[ExternalityRecord]:
    """Every nonzero cross-agent value change over explicit transitions.

    Identity-completed states cannot change anyone's value, so only the
    explicit transition domain is scanned.  Equality is exact.
    """
    records = []
    for cap in scenario.capabilities:
        for state, target in cap.transitions.items():
            for agent in scenario.agents:
                if agent == cap.owner:
                    continue
                row = scenario.values[agent]
                delta = row[target] - row[state]
                if delta != 0:
                    records.append(ExternalityRecord(cap.owner, cap.name, state, agent, delta))
    records.sort(key=lambda r: (r.actor, r.capability, r.state, r.affected))
    return records


def check_independence(scenario: Scenario) -> IndependenceVerdict:
    violations = tuple(externality_report(scenario))
    return IndependenceVerdict(not violations, violations)


def check_factorization(scenario: Scenario) -> FactorizationVerdict:
    """Verify that values and capabilities are local to each agent's coordinate.

    Agent ``i`` owns coordinate ``i`` in the declared agent order.  Raises
    ``ValueError`` when the scenario has no factor spec or a state id does
    not split into the declared number of coordinates.
    """
    spec = scenario.factor_spec
    if spec is None:
        raise ValueError("scenario has no factor_spec; state ids are not coordinate tuples")
    if spec.arity != len(scenario.agents):
        raise ValueError(f"factor_spec arity {spec.arity} != {len(scenario.agents)} agents")
    coords = {sid: spec.split(sid) for sid in scenario.state_ids}
    position = {agent: i for i, agent in enumerate(scenario.agents)}
    violations: list[FactorViolation] = []

    for agent, i in position.items():
        row = scenario.values[agent]
        first_with: dict[str, str] = {}
        for sid in sorted(coords):
            key = coords[sid][i]
            ref = first_with.setdefault(key, sid)
            if row[sid] != row[ref]:
                violations.append(FactorViolation(
                    "value-locality", agent, (ref, sid),
                    detail=f"{agent} values {ref}={row[ref]!r} and {sid}={row[sid]!r} "
                           f"differ though coordinate {i} is {key!r} in both",
                ))

    for cap in scenario.capabilities:
        i = position[cap.owner]
        for src, dst in sorted(cap.transitions.items()):
            changed = [j for j, (a, b) in enumerate(zip(coords[src], coords[dst])) if a != b and j != i]
            if changed:
                violations.append(FactorViolation(
                    "capability-locality", cap.owner, (src, dst), cap.name,
                    detail=f"{cap.name} changes coordinate(s) {changed} outside "
                           f"{cap.owner}'s coordinate {i}",
                ))
    return FactorizationVerdict(not violations, tuple(violations))


def transfer_analysis(scenario: Scenario, capability: str, state: str,
                      aggregator: str = "utilitarian-sum") -> TransferReport:
    """Per-agent value changes of one capability application and their aggregate."""
    cap = scenario.capability(capability)
    scenario.require_state(state)
    agg = welfare.get(aggregator)
    target = cap.apply(state)
    before = [scenario.values[a][state] for a in scenario.agents]
    after = [scenario.values[a][target] for a in scenario.agents]
    deltas = {a: y - x for a, x, y in zip(scenario.agents, before, after)}
    return TransferReport(
        capability, cap.owner, state, target, deltas, aggregator,
        agg(before, before, after),
        tuple(a for a, d in deltas.items() if d < 0),
    )

"""Capability values: reachability closure, V, gains, restriction and greedy moves."""

from __future__ import annotations

import dataclasses
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from capcalc.model import Scenario, UnknownNameError
from capcalc import welfare


class ProcedureNotApplicable(ValueError):
    def __init__(self, procedure: str, agent: str):
        self.procedure = procedure
        self.agent = agent
        super().__init__(f"procedure {procedure!r} does not list {agent!r} among its beneficiaries")


@dataclass(frozen=True)
class ReachableSet:
    agent: str
    origin: str
    states: frozenset[str]
    witness: Mapping[str, tuple[str, ...]]


@dataclass(frozen=True)
class ValueWitness:
    agent: str
    origin: str
    local: float
    value: float
    state: str
    path: tuple[str, ...]


@dataclass(frozen=True)
class GainReport:
    agent: str
    origin: str
    procedure: str
    v_before: float
    v_after: float
    gain: float


@dataclass(frozen=True)
class Trajectory:
    agent: str
    origin: str
    steps: tuple[tuple[str, str], ...]
    terminated: str  # "fixpoint" or "step-cap"

    @property
    def final_state(self) -> str:
        return self.steps[-1][1] if self.steps else self.origin


@dataclass(frozen=True)
class ProcedureComparison:
    aggregator: str
    p: str
    q: str
    gains_p: tuple[GainReport, ...]
    gains_q: tuple[GainReport, ...]
    score_p: float
    score_q: float
    winner: str  # p's name, q's name, or "tie"
    beneficiaries_p: tuple[str, ...]
    beneficiaries_q: tuple[str, ...]


def local_value(scenario: Scenario, agent: str, state: str) -> float:
    return scenario.value(agent, state)


def _moves(scenario: Scenario, agent: str, extra_procedures: Iterable[str]):
    scenario.require_agent(agent)
    moves = list(scenario.capabilities_of(agent))
    for name in sorted(set(extra_procedures)):
        proc = scenario.procedure(name)
        if agent not in proc.beneficiaries:
            raise ProcedureNotApplicable(name, agent)
        moves.append(proc)
    moves.sort(key=lambda m: m.name)
    return moves


def reachable(scenario: Scenario, agent: str, origin: str,
              extra_procedures: Iterable[str] = ()) -> ReachableSet:
    """Breadth-first closure of ``origin`` under the agent's moves.

    Witness paths are shortest; among shortest paths the lexicographically
    least sequence of move names wins.  Expanding the frontier in witness
    order with moves sorted by name yields exactly that path on first
    discovery.
    """
    scenario.require_state(origin)
    moves = _moves(scenario, agent, extra_procedures)
    witness: dict[str, tuple[str, ...]] = {origin: ()}
    queue = deque([origin])
    while queue:
        state = queue.popleft()
        for move in moves:
            nxt = move.apply(state)
            if nxt not in witness:
                witness[nxt] = witness[state] + (move.name,)
                queue.append(nxt)
    return ReachableSet(agent, origin, frozenset(witness), witness)


def value_witness(scenario: Scenario, agent: str, origin: str,
                  extra_procedures: Iterable[str] = ()) -> ValueWitness:
    reach = reachable(scenario, agent, origin, extra_procedures)
    row = scenario.values[agent]
    best = max(row[s] for s in reach.states)
    state = min(s for s in reach.states if row[s] == best)
    return ValueWitness(agent, origin, row[origin], best, state, reach.witness[state])


def capability_value(scenario: Scenario, agent: str, origin: str,
                     extra_procedures: Iterable[str] = ()) -> float:
    """Best local value the agent can reach from ``origin`` (staying put included)."""
    return value_witness(scenario, agent, origin, extra_procedures).value


def gain(scenario: Scenario, agent: str, origin: str, procedure: str) -> GainReport:
    """Increase in capability value from adding ``procedure`` to the agent's moves.

    An agent outside the procedure's beneficiaries keeps the unchanged set,
    so their gain is 0.
    """
    proc = scenario.procedure(procedure)
    before = capability_value(scenario, agent, origin)
    if agent in proc.beneficiaries:
        after = capability_value(scenario, agent, origin, [procedure])
    else:
        after = before
    return GainReport(agent, origin, procedure, before, after, after - before)


def restrict(scenario: Scenario, agent: str, banned: Iterable[str]) -> Scenario:
    """Return a copy of the scenario without the agent's ``banned`` capabilities."""
    scenario.require_agent(agent)
    banned = set(banned)
    for name in sorted(banned):
        cap = scenario.capability(name)
        if cap.owner != agent:
            raise ValueError(f"capability {name!r} is owned by {cap.owner!r}, not {agent!r}")
    kept = tuple(c for c in scenario.capabilities if c.name not in banned)
    return dataclasses.replace(scenario, capabilities=kept)


def greedy_trajectory(scenario: Scenario, agent: str, origin: str, max_steps: int,
                      extra_procedures: Iterable[str] = ()) -> Trajectory:
    """Repeatedly take the single move with the largest strict value increase."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    scenario.require_state(origin)
    moves = _moves(scenario, agent, extra_procedures)
    row = scenario.values[agent]
    state = origin
    steps = []
    while True:
        best = None
        for move in moves:
            nxt = move.apply(state)
            if row[nxt] > row[state] and (best is None or row[nxt] > row[best[1]]):
                best = (move.name, nxt)
        if best is None:
            return Trajectory(agent, origin, tuple(steps), "fixpoint")
        if len(steps) == max_steps:
            return Trajectory(agent, origin, tuple(steps), "step-cap")
        steps.append(best)
        state = best[1]


def _gain_vector(scenario, origins, procedure):
    missing = [a for a in scenario.agents if a not in origins]
    if missing:
        raise ValueError(f"no origin given for agent(s) {', '.join(missing)}")
    return tuple(gain(scenario, agent, origins[agent], procedure) for agent in scenario.agents)


def compare_procedures(scenario: Scenario, origins: Mapping[str, str], p: str, q: str,
                       aggregator: str = "utilitarian-sum") -> ProcedureComparison:
    """Score two procedures over every agent and pick the better one.

    ``origins`` gives each agent's current state.  Scores are aggregate
    welfare changes computed by :mod:`capcalc.welfare` from the agents'
    capability values before and after the procedure; prioritarian weights
    come from the agents' local values at their origins.
    """
    agg = welfare.get(aggregator)
    for agent in origins:
        scenario.require_agent(agent)
    gains_p = _gain_vector(scenario, origins, p)
    gains_q = _gain_vector(scenario, origins, q)
    local = [scenario.value(a, origins[a]) for a in scenario.agents]

    def score(reports):
        before = [r.v_before for r in reports]
        after = [r.v_after for r in reports]
        return agg(local, before, after)

    score_p, score_q = score(gains_p), score(gains_q)
    if p == q or score_p == score_q:
        winner = "tie"
    else:
        winner = p if score_p > score_q else q
    return ProcedureComparison(
        aggregator, p, q, gains_p, gains_q, score_p, score_q, winner,
        tuple(r.agent for r in gains_p if r.gain > 0),
        tuple(r.agent for r in gains_q if r.gain > 0),
    )


def per_capita_gain(scenario: Scenario, origins: Mapping[str, str], procedure: str) -> float:
    reports = _gain_vector(scenario, origins, procedure)
    return sum(r.gain for r in reports) / len(reports)


__all__ = [
    "GainReport", "ProcedureComparison", "ProcedureNotApplicable", "ReachableSet",
    "Trajectory", "UnknownNameError", "ValueWitness", "capability_value",
    "compare_procedures", "gain", "greedy_trajectory", "local_value",
    "per_capita_gain", "reachable", "restrict", "value_witness",
]

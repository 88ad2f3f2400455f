"""Rights, Pareto and the liberal paradox over strict preference profiles.

Outcomes are short string ids.  A social relation is a set of ordered
edges ``(better, worse)``, each tagged with where it came from: an agent's
right (``"right-of:<agent>"``), unanimity (``"pareto"``) or a transitivity
step (``"transitivity"``).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

PARETO = "pareto"
TRANSITIVITY = "transitivity"
POLICIES = ("rights-first", "pareto-first")


class ProfileError(ValueError):
    pass


def right_tag(agent: str) -> str:
    return f"right-of:{agent}"


@dataclass(frozen=True)
class PreferenceProfile:
    outcomes: tuple[str, ...]
    rankings: dict[str, tuple[str, ...]]  # best first

    def __post_init__(self):
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ProfileError("duplicate outcome ids")
        expected = sorted(self.outcomes)
        for agent, ranking in self.rankings.items():
            if sorted(ranking) != expected:
                raise ProfileError(f"ranking of {agent!r} is not a permutation of the outcomes")

    @property
    def agents(self) -> tuple[str, ...]:
        return tuple(self.rankings)

    def prefers(self, agent: str, x: str, y: str) -> bool:
        ranking = self.rankings[agent]
        return ranking.index(x) < ranking.index(y)


@dataclass(frozen=True)
class RightsAssignment:
    decisive: dict[str, tuple[frozenset, ...]] = field(default_factory=dict)

    def check(self, profile: PreferenceProfile) -> None:
        owner: dict[frozenset, str] = {}
        for agent, pairs in self.decisive.items():
            if agent not in profile.rankings:
                raise ProfileError(f"rights given to unknown agent {agent!r}")
            for pair in pairs:
                if len(pair) != 2:
                    raise ProfileError(f"decisive pair {sorted(pair)} must hold two distinct outcomes")
                for o in pair:
                    if o not in profile.outcomes:
                        raise ProfileError(f"decisive pair of {agent!r} names unknown outcome {o!r}")
                if pair in owner and owner[pair] != agent:
                    raise ProfileError(
                        f"pair {sorted(pair)} is assigned to both {owner[pair]!r} and {agent!r}"
                    )
                owner[pair] = agent


@dataclass
class SocialRelation:
    """Tagged edges; ``via`` records the middle outcome of transitive edges."""

    edges: dict[tuple[str, str], set[str]] = field(default_factory=dict)
    via: dict[tuple[str, str], str] = field(default_factory=dict)

    def add(self, better: str, worse: str, tag: str) -> None:
        self.edges.setdefault((better, worse), set()).add(tag)

    def __contains__(self, edge) -> bool:
        return tuple(edge) in self.edges

    def __iter__(self):
        return iter(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def tags(self, better: str, worse: str) -> set[str]:
        return self.edges[(better, worse)]

    def union(self, other: "SocialRelation") -> "SocialRelation":
        out = SocialRelation()
        for rel in (self, other):
            for (x, y), tags in rel.edges.items():
                for t in tags:
                    out.add(x, y, t)
        return out

    def successors(self, x: str) -> list[str]:
        return sorted(y for (a, y) in self.edges if a == x)

    def closure(self) -> "SocialRelation":
        """Transitive closure; derived edges are tagged ``transitivity``.

        Runs a breadth-first search from every outcome, so each derived
        edge records the predecessor on a shortest path as ``via``.
        """
        out = SocialRelation({e: set(t) for e, t in self.edges.items()}, dict(self.via))
        nodes = sorted({n for e in self.edges for n in e})
        for src in nodes:
            queue = deque([src])
            seen = {src}
            while queue:
                x = queue.popleft()
                for y in self.successors(x):
                    if (src, y) not in out.edges:
                        out.add(src, y, TRANSITIVITY)
                        out.via[(src, y)] = x
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        return out

    def explain(self, better: str, worse: str) -> list[tuple[str, str, tuple[str, ...]]]:
        """Base edges (with tags) that a possibly derived edge rests on."""
        edge = (better, worse)
        tags = self.edges[edge]
        if tags != {TRANSITIVITY}:
            return [(better, worse, tuple(sorted(tags)))]
        mid = self.via[edge]
        return self.explain(better, mid) + self.explain(mid, worse)

    def maximal(self, among) -> list[str]:
        among = set(among)
        return sorted(x for x in among if not any((y, x) in self.edges for y in among))


def rights_edges(profile: PreferenceProfile, rights: RightsAssignment) -> SocialRelation:
    rights.check(profile)
    rel = SocialRelation()
    for agent, pairs in rights.decisive.items():
        for pair in pairs:
            x, y = sorted(pair)
            if not profile.prefers(agent, x, y):
                x, y = y, x
            rel.add(x, y, right_tag(agent))
    return rel


def pareto_edges(profile: PreferenceProfile) -> SocialRelation:
    rel = SocialRelation()
    for x in profile.outcomes:
        for y in profile.outcomes:
            if x != y and all(profile.prefers(a, x, y) for a in profile.agents):
                rel.add(x, y, PARETO)
    return rel


@dataclass(frozen=True)
class Cycle:
    outcomes: tuple[str, ...]
    # one entry per edge around the cycle: (better, worse, tags)
    chain: tuple[tuple[str, str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class ParetoFinding:
    outcome: str
    dominated_by: tuple[str, ...]
    # why the outcome is top under rights, then the unanimity edges against it
    chain: tuple[tuple[str, str, tuple[str, ...]], ...]


@dataclass(frozen=True)
class ParadoxVerdict:
    cycle: Cycle | None
    pareto_inferior: tuple[ParetoFinding, ...]

    @property
    def clean(self) -> bool:
        return self.cycle is None and not self.pareto_inferior


def find_cycle(rel: SocialRelation) -> Cycle | None:
    """Shortest cycle through the least outcome lying on any cycle."""
    nodes = sorted({n for e in rel.edges for n in e})
    for start in nodes:
        parent = {start: None}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in rel.successors(x):
                if y == start:
                    path = [x]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    path.reverse()
                    ring = path + [start]
                    chain = tuple(
                        (a, b, tuple(sorted(rel.tags(a, b)))) for a, b in zip(ring, ring[1:])
                    )
                    return Cycle(tuple(path), chain)
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
    return None


def detect_paradox(profile: PreferenceProfile, rights: RightsAssignment) -> ParadoxVerdict:
    """Look for a preference cycle and for rights-maximal outcomes that are Pareto-dominated."""
    by_rights = rights_edges(profile, rights)
    pareto = pareto_edges(profile)
    cycle = find_cycle(by_rights.union(pareto))

    closed = by_rights.closure()
    findings = []
    for x in closed.maximal(profile.outcomes):
        dominators = tuple(y for y in profile.outcomes if (y, x) in pareto)
        if dominators:
            support = []
            for y in closed.successors(x):
                support.extend(closed.explain(x, y))
            support.extend((y, x, (PARETO,)) for y in dominators)
            findings.append(ParetoFinding(x, dominators, tuple(dict.fromkeys(support))))
    return ParadoxVerdict(cycle, tuple(findings))


@dataclass(frozen=True)
class Choice:
    policy: str
    outcome: str | None
    pareto_inferior_to: tuple[str, ...] = ()
    overridden_rights: tuple[tuple[str, str, tuple[str, ...]], ...] = ()
    failure: Cycle | None = None


def choose(profile: PreferenceProfile, rights: RightsAssignment,
           policy: str = "rights-first") -> Choice:
    """Pick a social outcome.

    ``rights-first`` takes the maximal outcomes of the transitively closed
    rights relation, ``pareto-first`` those of the unanimity relation.  Ties
    are broken by the other relation restricted to the tied outcomes, then by
    outcome id.  Fails with the offending cycle when nothing is maximal.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; choose one of {', '.join(POLICIES)}")
    base = rights_edges(profile, rights)
    by_rights = base.closure()
    pareto = pareto_edges(profile)
    primary, secondary = (by_rights, pareto) if policy == "rights-first" else (pareto, by_rights)

    top = primary.maximal(profile.outcomes)
    if not top:
        # only the rights relation can cycle; unanimity over strict orders cannot
        return Choice(policy, None, failure=find_cycle(base))
    refined = secondary.maximal(top) or top
    pick = refined[0]
    dominated_by = tuple(y for y in profile.outcomes if (y, pick) in pareto)
    overridden = tuple(
        (x, y, tuple(sorted(t))) for (x, y), t in sorted(by_rights.edges.items())
        if y == pick and t != {TRANSITIVITY}
    )
    return Choice(policy, pick, dominated_by, overridden)


# -- file format -------------------------------------------------------------


def load_profile(text: str) -> tuple[PreferenceProfile, RightsAssignment]:
    """Parse profile JSON with ``outcomes``, ``rankings`` and ``rights``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProfileError("profile must be a JSON object")
    extra = sorted(set(doc) - {"outcomes", "rankings", "rights"})
    if extra:
        raise ProfileError(f"unknown key(s): {', '.join(extra)}")
    try:
        outcomes = tuple(doc["outcomes"])
        rankings = {a: tuple(r) for a, r in doc["rankings"].items()}
    except (KeyError, AttributeError, TypeError) as exc:
        raise ProfileError(f"bad profile structure: {exc}") from None
    profile = PreferenceProfile(outcomes, rankings)
    raw_rights = doc.get("rights", {})
    if not isinstance(raw_rights, dict):
        raise ProfileError("rights must map agents to arrays of outcome pairs")
    decisive = {}
    for agent, pairs in raw_rights.items():
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise ProfileError(f"rights of {agent!r} must be an array of 2-element arrays")
        decisive[agent] = tuple(frozenset(p) for p in pairs)
    rights = RightsAssignment(decisive)
    rights.check(profile)
    return profile, rights

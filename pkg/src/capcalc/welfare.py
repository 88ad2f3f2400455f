"""Pluggable welfare aggregators.

Every aggregator scores a change from ``before`` to ``after`` levels for the
same agents.  ``local`` holds each agent's current local value and is only
used to weight agents by how badly off they are.
"""

from __future__ import annotations

from typing import Callable, Sequence

Aggregator = Callable[[Sequence[float], Sequence[float], Sequence[float]], float]


def utilitarian_sum(local, before, after) -> float:
    return sum(a - b for a, b in zip(after, before))


def maximin(local, before, after) -> float:
    """Change in the worst-off agent's level."""
    return min(after) - min(before)


def prioritarian_weights(local: Sequence[float]) -> list[float]:
    # 1 / (1 + v_i - min_j v_j): unchanged when every value shifts by a constant
    floor = min(local)
    return [1.0 / (1.0 + v - floor) for v in local]


def prioritarian(local, before, after) -> float:
    weights = prioritarian_weights(local)
    return sum(w * (a - b) for w, a, b in zip(weights, after, before))


AGGREGATORS: dict[str, Aggregator] = {
    "utilitarian-sum": utilitarian_sum,
    "maximin": maximin,
    "prioritarian": prioritarian,
}


def get(name: str) -> Aggregator:
    try:
        return AGGREGATORS[name]
    except KeyError:
        raise ValueError(
            f"unknown aggregator {name!r}; choose one of {', '.join(AGGREGATORS)}"
        ) from None

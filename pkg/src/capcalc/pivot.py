"""Probability that one extra vote is pivotal, and what that implies.

With ``2k`` other voters the extra vote decides the outcome only on a
``k``-``k`` tie, whose probability is taken to be ``(k!)^2 / (2k)!``, that
is ``1 / C(2k, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

MAX_EXACT_K = 10_000


@dataclass(frozen=True)
class TieQuery:
    """``electorate`` counts the other voters and must be even."""

    electorate: int

    def __post_init__(self):
        n = self.electorate
        if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n % 2:
            raise ValueError(f"electorate must be an even integer >= 2, got {n!r}")

    @property
    def k(self) -> int:
        return self.electorate // 2

    @classmethod
    def from_k(cls, k: int) -> "TieQuery":
        return cls(2 * k)


@dataclass(frozen=True)
class HarmModel:
    epsilon: float
    h: float
    population: int
    unit_cost: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.h < 0 or self.unit_cost < 0:
            raise ValueError("h and unit_cost must be >= 0")
        if isinstance(self.population, bool) or not isinstance(self.population, int) or self.population < 1:
            raise ValueError("population must be a positive integer")


def _check_k(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")


def tie_probability_exact(k: int) -> Fraction:
    _check_k(k)
    if k > MAX_EXACT_K:
        raise ValueError(
            f"k={k} exceeds the exact range (k <= {MAX_EXACT_K}); use tie_probability_log"
        )
    return Fraction(1, math.comb(2 * k, k))


def tie_probability_log(k: int) -> float:
    """Natural log of the tie probability, via log-gamma."""
    _check_k(k)
    return 2.0 * math.lgamma(k + 1) - math.lgamma(2 * k + 1)


@dataclass(frozen=True)
class FactorCheck:
    """The ratio written as ``prod_{j=1..k} j / (k + j)``.

    Every factor is at most 1/2, so any ``m`` of them bound the product by
    ``cap**m`` whenever ``cap >= 1/2``.
    """

    factors: int
    at_most_cap: int
    in_range: int  # inside [0.50, cap]
    smallest: float
    largest: float
    needed: float
    implies_bound: bool


@dataclass(frozen=True)
class BoundCheck:
    k: int
    exponent: float
    cap: float
    log_probability: float
    log_bound: float
    holds: bool
    margin_log10: float  # orders of magnitude by which the probability sits below the bound
    factors: FactorCheck


def _factor_check(k: int, exponent: float, cap: Fraction) -> FactorCheck:
    # j/(k+j) <= p/q  <=>  q*j <= p*(k+j); all comparisons stay in integers
    p, q = cap.numerator, cap.denominator
    at_most = sum(1 for j in range(1, k + 1) if q * j <= p * (k + j))
    in_range = sum(1 for j in range(1, k + 1) if 2 * j >= k + j and q * j <= p * (k + j))
    return FactorCheck(
        factors=k,
        at_most_cap=at_most,
        in_range=in_range,
        smallest=1 / (k + 1),
        largest=k / (2 * k),
        needed=exponent,
        implies_bound=at_most >= exponent,
    )


def verify_paper_bound(k: int = 22_000, exponent: float | None = None,
                       cap: Fraction = Fraction(3, 4)) -> BoundCheck:
    """Check ``P(tie) < cap**exponent`` two ways.

    ``exponent`` defaults to ``k / 2`` (11,000 factors of 0.75 for the
    44,000-voter case).  The log-gamma route gives the margin; the factor
    route checks that enough factors of the exact product sit at or below
    ``cap``.
    """
    if exponent is None:
        exponent = k / 2
    log_p = tie_probability_log(k)
    log_bound = exponent * math.log(cap)
    return BoundCheck(
        k=k,
        exponent=exponent,
        cap=float(cap),
        log_probability=log_p,
        log_bound=log_bound,
        holds=log_p < log_bound,
        margin_log10=(log_bound - log_p) / math.log(10),
        factors=_factor_check(k, exponent, Fraction(cap)),
    )


@dataclass(frozen=True)
class HarmEstimate:
    k: int
    h: float
    log_value: float  # -inf when h == 0
    value: float


def expected_harm(query: TieQuery, h: float) -> HarmEstimate:
    """``h * P(tie)`` computed in log space; the value may underflow to 0."""
    if h < 0:
        raise ValueError("h must be >= 0")
    log_p = tie_probability_log(query.k)
    log_value = log_p + math.log(h) if h > 0 else -math.inf
    return HarmEstimate(query.k, h, log_value, math.exp(log_value))


@dataclass(frozen=True)
class EpsilonDecision:
    aggregate_effect: float
    unit_cost: float
    act: bool
    harm: HarmEstimate | None = None
    private_gain_exceeds_harm: bool | None = None


def epsilon_threshold(model: HarmModel, tie: TieQuery | None = None) -> EpsilonDecision:
    """Small effect times a large population against a fixed cost.

    With ``tie`` given, also compares the private gain ``epsilon`` of one
    vote against the expected social harm ``h * P(tie)`` (in log space, so
    an underflowing probability still compares correctly).
    """
    total = model.epsilon * model.population
    harm = exceeds = None
    if tie is not None:
        harm = expected_harm(tie, model.h)
        exceeds = math.log(model.epsilon) > harm.log_value
    return EpsilonDecision(total, model.unit_cost, total > model.unit_cost, harm, exceeds)

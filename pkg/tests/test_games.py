import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from capcalc.games import (
    COL,
    ROW,
    GameError,
    NormalFormGame,
    deterrence_threshold,
    dominant_strategies,
    dump_game,
    game_from_scenario,
    load_game,
    pure_nash,
)
from capcalc.model import UnknownNameError
from oracles import brute_nash, random_game

seeds = st.integers(0, 2**32 - 1)

SALE_TABLE = ((300, 100), (0, 0)), ((0, 0), (0, 0))


def test_sale_game_equilibria(game):
    eq = pure_nash(game("sale"))
    assert ("buy", "sell") in eq
    assert set(eq) == {("buy", "sell"), ("no buy", "no sell")}
    assert set(eq) == brute_nash(game("sale"))


def test_threat_game_equilibria(game):
    eq = pure_nash(game("threat"))
    assert ("threaten", "give") in eq
    assert set(eq) == {("no buy", "no give"), ("threaten", "give")}


def test_all_zero_game():
    g = NormalFormGame(("a", "b"), ("x", "y"), (((0, 0), (0, 0)), ((0, 0), (0, 0))))
    assert len(pure_nash(g)) == 4


def test_threaten_weakly_dominant(game):
    assert dominant_strategies(game("threat"), ROW) == [("threaten", "weak")]


def test_buy_weakly_dominates_in_sale(game):
    # buy vs no buy: 300 > 0 against sell, 0 = 0 against no sell
    assert dominant_strategies(game("sale"), ROW) == [("buy", "weak")]


def test_single_strategy_convention():
    g = NormalFormGame(("only",), ("x", "y"), (((1, 0), (2, 0)),))
    assert dominant_strategies(g, ROW) == [("only", "weak")]


def test_strict_dominance():
    g = NormalFormGame(("top", "bottom"), ("l", "r"), (((3, 0), (2, 1)), ((1, 0), (0, 1))))
    assert dominant_strategies(g, ROW) == [("top", "strict")]
    assert dominant_strategies(g, COL) == [("r", "strict")]


def test_paper_deterrence(game):
    r = deterrence_threshold(game("threat"), "threaten", ("buy", "sell"))
    # 900 - d < 300
    assert r.threshold == 600 and r.open
    assert not r.suffices(600) and r.suffices(601)


def test_deterrence_with_bigger_prize(game):
    g = game("threat")
    rows = list(g.payoffs)
    rows[2] = ((1300, -500), (0, -1000))
    g = NormalFormGame(g.row_strategies, g.col_strategies, tuple(rows), g.row_aliases, g.col_aliases)
    r = deterrence_threshold(g, "threaten", ("buy", "sell"))
    assert r.threshold == 1000 and r.open


def test_penalty_at_threshold_restores_sale(game):
    g = game("threat")
    assert ("threaten", "give") in pure_nash(g.with_row_penalty("threaten", 600))
    fixed = pure_nash(g.with_row_penalty("threaten", 601))
    assert ("buy", "give") in fixed
    assert all(r != "threaten" for r, _ in fixed)


def test_never_equilibrium_needs_no_penalty(game):
    g = game("sale")
    g = NormalFormGame(g.row_strategies + ("dud",), g.col_strategies,
                       g.payoffs + (((-5, 0), (-5, 0)),))
    r = deterrence_threshold(g, "dud", ("buy", "sell"))
    assert r.threshold == 0 and not r.open


def test_target_must_be_equilibrium(game):
    with pytest.raises(GameError, match="not a pure equilibrium"):
        deterrence_threshold(game("threat"), "threaten", ("buy", "no give"))
    with pytest.raises(UnknownNameError):
        deterrence_threshold(game("threat"), "threaten", ("buy", "steal"))


def test_aliases_resolve(game):
    g = game("threat")
    assert g.profile_indices(("buy", "sell")) == (0, 0)
    assert g.profile_indices(("buy", "give")) == (0, 0)


def test_game_from_sale_scenario(scenario):
    g = game_from_scenario(scenario("sale"), "ravi", "sona", ["buy"], ["sell"], "start")
    assert g.row_strategies == ("buy", "pass") and g.col_strategies == ("sell", "pass")
    assert g.payoffs == SALE_TABLE


def test_game_from_scenario_pass_cell(scenario):
    s = scenario("aditi")
    g = game_from_scenario(s, "aditi", "mother", ["walk"], [], "home")
    assert g.payoffs[-1][-1] == (s.values["aditi"]["home"], s.values["mother"]["home"])


def test_identity_capability_game(scenario):
    s = scenario("aditi")
    g = game_from_scenario(s, "aditi", "mother", ["walk"], [], "has-icecream")
    assert len({cell for row in g.payoffs for cell in row}) == 1


def test_game_from_scenario_errors(scenario):
    s = scenario("sale")
    with pytest.raises(UnknownNameError):
        game_from_scenario(s, "ravi", "sona", ["steal"], [], "start")
    with pytest.raises(GameError):
        game_from_scenario(s, "ravi", "sona", ["sell"], [], "start")


@pytest.mark.parametrize("doc, fragment", [
    ({"row_strategies": ["a"], "col_strategies": ["x"], "payoffs": [[1, 2, 3]]}, "two players"),
    ({"row_strategies": ["a"], "col_strategies": ["x", "y"], "payoffs": [[1, 2]]}, "1x2"),
    ({"row_strategies": ["a"], "col_strategies": ["x"], "payoffs": [[1, "2"]]}, "not a number"),
    ({"row_strategies": ["a"], "col_strategies": ["x"]}, "payoffs"),
    ({"row_strategies": ["a", "a"], "col_strategies": ["x"], "payoffs": [[0, 0], [0, 0]]}, "duplicate"),
    ({"row_strategies": ["a"], "col_strategies": ["x"], "payoffs": [[0, 0]], "players": 3}, "unknown"),
])
def test_bad_game_files(doc, fragment):
    with pytest.raises(GameError, match=fragment):
        load_game(json.dumps(doc))


def test_game_round_trip(game):
    g = game("threat")
    assert load_game(dump_game(g)) == g


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_nash_matches_brute_force(seed):
    g = random_game(random.Random(seed))
    assert set(pure_nash(g)) == brute_nash(g)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(-50, 50), st.sampled_from([ROW, COL]))
def test_translation_invariance(seed, shift, player):
    g = random_game(random.Random(seed))
    i = 0 if player == ROW else 1
    shifted = tuple(
        tuple(tuple(x + shift if k == i else x for k, x in enumerate(cell)) for cell in row)
        for row in g.payoffs
    )
    h = NormalFormGame(g.row_strategies, g.col_strategies, shifted)
    assert pure_nash(h) == pure_nash(g)
    for p in (ROW, COL):
        assert dominant_strategies(h, p) == dominant_strategies(g, p)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_strict_dominant_in_every_equilibrium(seed):
    g = random_game(random.Random(seed))
    for player, idx in ((ROW, 0), (COL, 1)):
        for s, kind in dominant_strategies(g, player):
            if kind == "strict":
                assert all(profile[idx] == s for profile in pure_nash(g))


@settings(max_examples=300, deadline=None)
@given(seeds)
def test_deterrence_monotone_and_effective(seed):
    rng = random.Random(seed)
    g = random_game(rng)
    if g.shape[0] < 2:
        return
    deterred = rng.choice(g.row_strategies)
    targets = list(pure_nash(g.without_row(deterred)))
    if not targets:
        return
    target = rng.choice(targets)
    base = deterrence_threshold(g, deterred, target)

    k = g.row_strategies.index(deterred)
    rows = list(g.payoffs)
    rows[k] = tuple((a + rng.randint(0, 10), b) for a, b in rows[k])
    raised = NormalFormGame(g.row_strategies, g.col_strategies, tuple(rows))
    assert deterrence_threshold(raised, deterred, target).threshold >= base.threshold

    # just enough penalty works; anything short of it does not
    enough = base.threshold + (1 if base.open else 0)
    eq = pure_nash(g.with_row_penalty(deterred, enough))
    assert tuple(target) in eq
    assert all(r != deterred for r, _ in eq)
    if base.threshold > 0:
        short = pure_nash(g.with_row_penalty(deterred, base.threshold - (0 if base.open else 1)))
        assert tuple(target) not in short or any(r == deterred for r, _ in short)

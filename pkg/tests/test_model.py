import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from capcalc.model import (
    ScenarioParseError,
    ScenarioValidationError,
    UnknownNameError,
    dump_scenario,
    load_scenario,
    parse_scenario,
    validate,
)
from conftest import fixture_text
from oracles import random_product_scenario, random_scenario

MINIMAL = {"agents": ["a"], "states": [{"id": "s", "labels": []}], "values": {"a": {"s": 0}}}


def doc(**changes):
    d = json.loads(json.dumps(MINIMAL))
    d.update(changes)
    return json.dumps(d)


def test_minimal_scenario():
    s = load_scenario(json.dumps(MINIMAL))
    assert len(s.agents) == 1 and len(s.states) == 1
    assert s.values["a"]["s"] == 0
    assert s.capabilities == () and s.procedures == ()


def test_aditi_fixture_shape():
    s = load_scenario(fixture_text("aditi.scenario.json"))
    assert s.agents == ("aditi", "mother")
    assert s.state_ids == ("home", "shop", "has-icecream")


def test_undeclared_state_is_named():
    text = doc(capabilities=[{"name": "fly", "owner": "a", "transitions": {"s": "moon"}}])
    with pytest.raises(ScenarioValidationError) as info:
        load_scenario(text)
    assert "moon" in str(info.value)
    assert len(info.value.violations) == 1


@pytest.mark.parametrize("text, fragment", [
    ("{not json", "malformed JSON"),
    ("[]", "JSON object"),
    (doc(extra=1), "'extra'"),
    (json.dumps({"agents": ["a"], "states": []}), "'values'"),
    (doc(agents="a"), "agents"),
    (doc(values={"a": {"s": "high"}}), "number"),
    (doc(values={"a": {"s": True}}), "number"),
    (doc(states=[{"id": "s", "colour": "red"}]), "'colour'"),
    (doc(factor_spec={"arity": 0, "separator": "-"}), "arity"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(ScenarioParseError, match=fragment):
        load_scenario(text)


@pytest.mark.parametrize("changes, fragment", [
    ({"agents": ["a", "a"]}, "duplicate"),
    ({"agents": ["a b"]}, "A-Za-z0-9"),
    ({"states": [{"id": "s"}, {"id": "s"}]}, "duplicate"),
    ({"values": {"a": {"s": float("nan")}}}, "not finite"),
    ({"values": {"a": {"s": 1, "t": 2}}}, "undeclared state 't'"),
    ({"values": {"a": {"s": 1}, "ghost": {"s": 1}}}, "undeclared agent 'ghost'"),
    ({"procedures": [{"name": "p", "beneficiaries": [], "transitions": {}}]}, "non-empty"),
    ({"procedures": [{"name": "p", "beneficiaries": ["b"], "transitions": {}}]}, "'b'"),
    ({"capabilities": [{"name": "x", "owner": "a", "transitions": {}}],
      "procedures": [{"name": "x", "beneficiaries": ["a"], "transitions": {}}]}, "already used"),
    ({"factor_spec": {"arity": 2, "separator": "-"}}, "arity 2"),
])
def test_validation_errors(changes, fragment):
    with pytest.raises(ScenarioValidationError, match=fragment):
        load_scenario(doc(**changes))


def test_python_json_infinity_rejected():
    with pytest.raises(ScenarioValidationError, match="not finite"):
        load_scenario('{"agents": ["a"], "states": [{"id": "s"}], "values": {"a": {"s": Infinity}}}')


def test_validate_valid_scenario_is_empty(scenario):
    assert validate(scenario("aditi")) == []


def test_validate_foreign_owner():
    s = parse_scenario(doc(capabilities=[{"name": "x", "owner": "nobody", "transitions": {}}]))
    problems = validate(s)
    assert len(problems) == 1 and "nobody" in problems[0]


def test_validate_missing_value_entry():
    text = doc(states=[{"id": "s"}, {"id": "t"}])
    problems = validate(parse_scenario(text))
    assert len(problems) == 1 and "'t'" in problems[0]


def test_factor_spec_parse_failure_named():
    text = json.dumps({
        "agents": ["a", "b"],
        "states": [{"id": "x-y"}, {"id": "xy"}],
        "values": {"a": {"x-y": 0, "xy": 0}, "b": {"x-y": 0, "xy": 0}},
        "factor_spec": {"arity": 2, "separator": "-"},
    })
    with pytest.raises(ScenarioValidationError, match="'xy'"):
        load_scenario(text)


def test_lookups(scenario):
    s = scenario("aditi")
    assert s.capability("walk").owner == "aditi"
    with pytest.raises(UnknownNameError):
        s.capability("fly")
    with pytest.raises(UnknownNameError):
        s.procedure("bus")
    with pytest.raises(UnknownNameError):
        s.value("aditi", "moon")


def test_capability_identity_outside_domain(scenario):
    walk = scenario("aditi").capability("walk")
    assert walk.apply("home") == "shop"
    assert walk.apply("has-icecream") == "has-icecream"


def test_loading_is_deterministic():
    text = fixture_text("aditi-far.scenario.json")
    assert load_scenario(text) == load_scenario(text)


@pytest.mark.parametrize("name", [
    "aditi", "aditi-far", "aditi-shop", "movie", "gun-school", "pool-bus",
    "transfer", "snoring", "product", "sale",
])
def test_fixture_round_trip(name):
    once = load_scenario(fixture_text(f"{name}.scenario.json"))
    twice = load_scenario(dump_scenario(once))
    assert twice == once
    assert dump_scenario(twice) == dump_scenario(once)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.booleans())
def test_random_round_trip_and_validity(seed, product):
    rng = random.Random(seed)
    s = random_product_scenario(rng) if product else random_scenario(rng)
    assert validate(s) == []
    loaded = load_scenario(dump_scenario(s))
    assert loaded == s
    assert validate(loaded) == []

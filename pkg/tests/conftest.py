import sys
from pathlib import Path

import pytest

from capcalc.model import load_scenario
from capcalc.games import load_game
from capcalc.paradox import load_profile

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "capcalc" / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def scenario():
    def _load(name):
        return load_scenario(fixture_text(f"{name}.scenario.json"))
    return _load


@pytest.fixture
def game():
    def _load(name):
        return load_game(fixture_text(f"{name}.game.json"))
    return _load


@pytest.fixture
def sen():
    return load_profile(fixture_text("sen-lady-chatterley.profile.json"))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance")
    for label, ok, detail in acceptance.RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  [{detail}]")

"""Capability calculus: what agents can reach in finite world models, and who gains."""

from capcalc.model import (
    Capability,
    FactorSpec,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    SocialProcedure,
    UnknownNameError,
    WorldState,
    dump_scenario,
    load_scenario,
    validate,
)

__version__ = "0.1.0"

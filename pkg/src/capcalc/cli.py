"""``capcalc`` command line.

Exit codes: 0 ok, 2 input could not be loaded or validated, 3 unknown
name, 4 domain error (the inputs load but the analysis is undefined).
File arguments that do not exist on disk are looked up in the fixtures
directory (``$CAPCALC_FIXTURES`` or the bundled one).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from capcalc import capability, externality, games, paradox, pivot, welfare
from capcalc.model import UnknownNameError, load_scenario

EXIT_OK, EXIT_LOAD, EXIT_NAME, EXIT_DOMAIN = 0, 2, 3, 4


class LoadError(Exception):
    pass


def fixtures_dir() -> Path:
    override = os.environ.get("CAPCALC_FIXTURES")
    if override:
        return Path(override)
    return Path(str(resources.files("capcalc") / "fixtures"))


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.is_file():
        return p
    candidate = fixtures_dir() / path
    if candidate.is_file():
        return candidate
    raise LoadError(f"{path}: no such file (also looked in {fixtures_dir()})")


def _read(path: str, inputs: dict) -> str:
    p = _resolve(path)
    data = p.read_bytes()
    inputs[path] = "sha256:" + hashlib.sha256(data).hexdigest()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise LoadError(f"{path}: not UTF-8 ({exc})") from None


def _load(path, inputs, parser):
    text = _read(path, inputs)
    try:
        return parser(text)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None


def _num(x):
    """JSON-safe number: Fractions become "p/q", infinities become null."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _edge(e):
    better, worse, tags = e
    return {"better": better, "worse": worse, "tags": list(tags)}


# -- commands ----------------------------------------------------------------


def cmd_value(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    w = capability.value_witness(scenario, args.agent, args.state, args.with_)
    return {
        "agent": w.agent,
        "origin": w.origin,
        "procedures": sorted(args.with_),
        "local_value": w.local,
        "capability_value": w.value,
        "argmax_state": w.state,
        "witness_path": list(w.path),
    }


def cmd_gain(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    r = capability.gain(scenario, args.agent, args.state, args.procedure)
    return {
        "agent": r.agent, "origin": r.origin, "procedure": r.procedure,
        "v_before": r.v_before, "v_after": r.v_after, "gain": r.gain,
    }


def _load_origins(text):
    doc = json.loads(text)
    if not isinstance(doc, dict) or not all(isinstance(v, str) for v in doc.values()):
        raise ValueError("origins must be a JSON object mapping agents to state ids")
    return doc


def cmd_compare(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    origins = _load(args.origins, inputs, _load_origins)
    c = capability.compare_procedures(scenario, origins, args.p, args.q, args.aggregator)
    gains = lambda reports: {r.agent: r.gain for r in reports}  # noqa: E731
    return {
        "aggregator": c.aggregator,
        "p": {"name": c.p, "score": c.score_p, "gains": gains(c.gains_p),
              "beneficiaries": list(c.beneficiaries_p),
              "per_capita_gain": capability.per_capita_gain(scenario, origins, c.p)},
        "q": {"name": c.q, "score": c.score_q, "gains": gains(c.gains_q),
              "beneficiaries": list(c.beneficiaries_q),
              "per_capita_gain": capability.per_capita_gain(scenario, origins, c.q)},
        "winner": c.winner,
    }


def cmd_independence(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    verdict = externality.check_independence(scenario)
    out = {
        "independence_holds": verdict.holds,
        "externalities": [
            {"actor": r.actor, "capability": r.capability, "state": r.state,
             "affected": r.affected, "delta": r.delta, "sign": r.sign}
            for r in verdict.violations
        ],
    }
    if scenario.factor_spec is not None:
        fv = externality.check_factorization(scenario)
        out["factorization"] = {
            "holds": fv.holds,
            "violations": [
                {"rule": v.rule, "agent": v.agent, "states": list(v.states),
                 "capability": v.capability, "detail": v.detail}
                for v in fv.violations
            ],
        }
    return out


def cmd_transfer(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    r = externality.transfer_analysis(scenario, args.capability, args.state, args.aggregator)
    return {
        "capability": r.capability, "actor": r.actor, "state": r.state, "result": r.result,
        "deltas": dict(r.deltas), "aggregator": r.aggregator, "aggregate": r.aggregate,
        "losers": list(r.losers), "improving_despite_loser": r.improving_despite_loser,
    }


def cmd_greedy(args, inputs):
    scenario = _load(args.scenario, inputs, load_scenario)
    t = capability.greedy_trajectory(scenario, args.agent, args.state, args.max_steps)
    row = scenario.values[args.agent]
    return {
        "agent": t.agent, "origin": t.origin,
        "steps": [{"capability": n, "state": s, "value": row[s]} for n, s in t.steps],
        "terminated": t.terminated,
    }


def cmd_equilibrium(args, inputs):
    game = _load(args.game, inputs, games.load_game)
    return {
        "shape": list(game.shape),
        "pure_nash": [list(p) for p in games.pure_nash(game)],
        "dominant": {
            player: [{"strategy": s, "kind": k} for s, k in games.dominant_strategies(game, player)]
            for player in (games.ROW, games.COL)
        },
    }


def cmd_deter(args, inputs):
    game = _load(args.game, inputs, games.load_game)
    r = games.deterrence_threshold(game, args.deterred, (args.row, args.col))
    return {
        "deterred": r.deterred,
        "target": list(r.target),
        "threshold": _num(r.threshold),
        "open": r.open,
        "condition": f"penalty {'>' if r.open else '>='} {_num(r.threshold)}",
    }


def cmd_paradox(args, inputs):
    profile, rights = _load(args.profile, inputs, paradox.load_profile)
    verdict = paradox.detect_paradox(profile, rights)
    choice = paradox.choose(profile, rights, args.policy)
    out = {
        "clean": verdict.clean,
        "cycle": None,
        "pareto_inferior": [
            {"outcome": f.outcome, "dominated_by": list(f.dominated_by),
             "chain": [_edge(e) for e in f.chain]}
            for f in verdict.pareto_inferior
        ],
        "choice": {
            "policy": choice.policy,
            "outcome": choice.outcome,
            "pareto_inferior_to": list(choice.pareto_inferior_to),
            "overridden_rights": [_edge(e) for e in choice.overridden_rights],
            "failure_cycle": list(choice.failure.outcomes) if choice.failure else None,
        },
    }
    if verdict.cycle is not None:
        out["cycle"] = {"outcomes": list(verdict.cycle.outcomes),
                        "chain": [_edge(e) for e in verdict.cycle.chain]}
    return out


def cmd_pivot(args, inputs):
    out = {"k": args.k, "electorate": 2 * args.k,
           "log_probability": pivot.tie_probability_log(args.k)}
    out["log10_probability"] = out["log_probability"] / math.log(10)
    if args.exact:
        out["probability"] = _num(pivot.tie_probability_exact(args.k))
    bound = pivot.verify_paper_bound(args.k)
    out["bound"] = {
        "cap": bound.cap, "exponent": bound.exponent, "log_bound": bound.log_bound,
        "holds": bound.holds, "margin_log10": bound.margin_log10,
        "factors": bound.factors.factors,
        "factors_at_most_cap": bound.factors.at_most_cap,
        "factors_in_range": bound.factors.in_range,
        "factor_route_implies_bound": bound.factors.implies_bound,
    }
    if args.h is not None:
        harm = pivot.expected_harm(pivot.TieQuery.from_k(args.k), args.h)
        out["expected_harm"] = {"h": harm.h, "value": harm.value, "log_value": _num(harm.log_value)}
    if args.epsilon is not None:
        model = pivot.HarmModel(args.epsilon, args.h or 0.0, args.population, args.cost)
        d = pivot.epsilon_threshold(model, pivot.TieQuery.from_k(args.k))
        out["epsilon"] = {
            "aggregate_effect": d.aggregate_effect, "unit_cost": d.unit_cost, "act": d.act,
            "private_gain_exceeds_harm": d.private_gain_exceeds_harm,
        }
    return out


# -- output ------------------------------------------------------------------


def _text_lines(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                yield f"{pad}{key}:"
                yield from _text_lines(item, indent + 1)
            else:
                yield f"{pad}{key}: {_scalar(item)}"
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, dict) and item:
                lines = list(_text_lines(item, indent + 1))
                yield f"{pad}- {lines[0].lstrip()}"
                yield from lines[1:]
            else:
                yield f"{pad}- {_scalar(item)}"
    else:
        yield f"{pad}{_scalar(value)}"


def _scalar(x):
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, list):
        return "[]" if not x else ", ".join(_scalar(i) for i in x)
    if isinstance(x, dict):
        return "{}"
    return str(x)


def render(report: dict) -> str:
    if report["format"] == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"capcalc {report['command']}"]
    for path, digest in sorted(report["inputs"].items()):
        lines.append(f"input {path} {digest}")
    lines.extend(_text_lines(report["findings"]))
    return "\n".join(lines) + "\n"


COMMANDS = {
    "value": cmd_value, "gain": cmd_gain, "compare": cmd_compare,
    "independence": cmd_independence, "transfer": cmd_transfer, "greedy": cmd_greedy,
    "equilibrium": cmd_equilibrium, "deter": cmd_deter, "paradox": cmd_paradox,
    "pivot": cmd_pivot,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capcalc", description="Capability calculus analyses.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="local value v and capability value V")
    p.add_argument("scenario")
    p.add_argument("agent")
    p.add_argument("state")
    p.add_argument("--with", dest="with_", action="append", default=[], metavar="PROCEDURE")

    p = sub.add_parser("gain", help="gain from one social procedure")
    p.add_argument("scenario")
    p.add_argument("agent")
    p.add_argument("state")
    p.add_argument("procedure")

    aggregators = tuple(welfare.AGGREGATORS)
    p = sub.add_parser("compare", help="compare two procedures across all agents")
    p.add_argument("scenario")
    p.add_argument("origins", help="JSON object: agent -> current state")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--aggregator", choices=aggregators, default="utilitarian-sum")

    p = sub.add_parser("independence", help="externalities and factorization")
    p.add_argument("scenario")

    p = sub.add_parser("transfer", help="welfare effect of one capability application")
    p.add_argument("scenario")
    p.add_argument("capability")
    p.add_argument("state")
    p.add_argument("--aggregator", choices=aggregators, default="utilitarian-sum")

    p = sub.add_parser("greedy", help="greedy improving moves from a state")
    p.add_argument("scenario")
    p.add_argument("agent")
    p.add_argument("state")
    p.add_argument("--max-steps", type=int, default=100)

    p = sub.add_parser("equilibrium", help="pure Nash equilibria and dominant strategies")
    p.add_argument("game")

    p = sub.add_parser("deter", help="penalty needed to deter a row strategy")
    p.add_argument("game")
    p.add_argument("deterred")
    p.add_argument("row", help="target profile, row strategy")
    p.add_argument("col", help="target profile, column strategy")

    p = sub.add_parser("paradox", help="rights vs Pareto over a preference profile")
    p.add_argument("profile")
    p.add_argument("--policy", choices=paradox.POLICIES, default="rights-first")

    p = sub.add_parser("pivot", help="probability a single vote breaks a tie")
    p.add_argument("--k", type=int, required=True, help="half the number of other voters")
    p.add_argument("--h", type=float, help="harm to society if the bad outcome wins")
    p.add_argument("--exact", action="store_true", help="also print the exact rational")
    p.add_argument("--epsilon", type=float, help="net private gain of the act")
    p.add_argument("--population", type=int, default=1)
    p.add_argument("--cost", type=float, default=0.0)
    return parser


def run(argv=None) -> tuple[int, str, str]:
    """Run a command; return (exit code, stdout text, stderr text)."""
    args = build_parser().parse_args(argv)
    inputs: dict[str, str] = {}
    try:
        findings = COMMANDS[args.command](args, inputs)
    except LoadError as exc:
        return EXIT_LOAD, "", f"capcalc: load error: {exc}\n"
    except UnknownNameError as exc:
        return EXIT_NAME, "", f"capcalc: {exc}\n"
    except ValueError as exc:
        return EXIT_DOMAIN, "", f"capcalc: {exc}\n"
    report = {"command": args.command, "inputs": inputs, "findings": findings, "format": args.format}
    return EXIT_OK, render(report), ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())

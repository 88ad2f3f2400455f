"""Two-player normal-form games: pure equilibria, dominance and deterrence."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from capcalc.model import Scenario, UnknownNameError

ROW, COL = "row", "col"
PASS = "pass"


class GameError(ValueError):
    pass


@dataclass(frozen=True)
class NormalFormGame:
    """A bimatrix game.  ``payoffs[r][c]`` is the (row, column) payoff pair.

    ``row_aliases``/``col_aliases`` map alternative names onto strategy
    names, so a profile written in another game's vocabulary can be
    resolved against this one.
    """

    row_strategies: tuple[str, ...]
    col_strategies: tuple[str, ...]
    payoffs: tuple[tuple[tuple[float, float], ...], ...]
    row_aliases: Mapping[str, str] = field(default_factory=dict)
    col_aliases: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.row_strategies or not self.col_strategies:
            raise GameError("a game needs at least one strategy per player")
        for names, who in ((self.row_strategies, ROW), (self.col_strategies, COL)):
            if len(set(names)) != len(names):
                raise GameError(f"duplicate {who} strategy names")
        if len(self.payoffs) != len(self.row_strategies) or any(
            len(r) != len(self.col_strategies) for r in self.payoffs
        ):
            raise GameError("payoff matrix dimensions do not match the strategy lists")
        for r in self.payoffs:
            for cell in r:
                if len(cell) != 2:
                    raise GameError("each payoff cell must be a (row, column) pair; only two players")
                if not all(math.isfinite(x) for x in cell):
                    raise GameError("payoffs must be finite")
        for aliases, names in ((self.row_aliases, self.row_strategies),
                               (self.col_aliases, self.col_strategies)):
            for alias, target in aliases.items():
                if target not in names:
                    raise GameError(f"alias {alias!r} points at unknown strategy {target!r}")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_strategies), len(self.col_strategies)

    def u(self, player: str, r: int, c: int) -> float:
        return self.payoffs[r][c][0 if player == ROW else 1]

    def index(self, player: str, name: str) -> int:
        names = self.row_strategies if player == ROW else self.col_strategies
        aliases = self.row_aliases if player == ROW else self.col_aliases
        name = aliases.get(name, name)
        try:
            return names.index(name)
        except ValueError:
            raise UnknownNameError(f"{player} strategy", name) from None

    def profile_indices(self, profile: tuple[str, str]) -> tuple[int, int]:
        return self.index(ROW, profile[0]), self.index(COL, profile[1])

    def without_row(self, name: str) -> "NormalFormGame":
        k = self.index(ROW, name)
        rows = self.row_strategies[:k] + self.row_strategies[k + 1:]
        if not rows:
            raise GameError("cannot remove the only row strategy")
        return NormalFormGame(
            rows, self.col_strategies, self.payoffs[:k] + self.payoffs[k + 1:],
            {a: t for a, t in self.row_aliases.items() if t != self.row_strategies[k]},
            self.col_aliases,
        )

    def with_row_penalty(self, name: str, penalty) -> "NormalFormGame":
        k = self.index(ROW, name)
        rows = list(self.payoffs)
        rows[k] = tuple((a - penalty, b) for a, b in rows[k])
        return NormalFormGame(self.row_strategies, self.col_strategies, tuple(rows),
                              self.row_aliases, self.col_aliases)


@dataclass(frozen=True)
class EquilibriumSet:
    profiles: tuple[tuple[str, str], ...]

    def __contains__(self, profile) -> bool:
        return tuple(profile) in self.profiles

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self) -> int:
        return len(self.profiles)


@dataclass(frozen=True)
class DeterrenceResult:
    deterred: str
    target: tuple[str, str]
    threshold: Fraction | float
    open: bool  # True: the penalty must strictly exceed the threshold

    def suffices(self, penalty) -> bool:
        return penalty > self.threshold if self.open else penalty >= self.threshold


def _is_equilibrium(game: NormalFormGame, r: int, c: int) -> bool:
    nr, nc = game.shape
    row_ok = all(game.u(ROW, r, c) >= game.u(ROW, k, c) for k in range(nr))
    col_ok = all(game.u(COL, r, c) >= game.u(COL, r, k) for k in range(nc))
    return row_ok and col_ok


def pure_nash(game: NormalFormGame) -> EquilibriumSet:
    """Profiles where no player strictly gains by deviating alone, in matrix order."""
    nr, nc = game.shape
    return EquilibriumSet(tuple(
        (game.row_strategies[r], game.col_strategies[c])
        for r in range(nr) for c in range(nc)
        if _is_equilibrium(game, r, c)
    ))


def dominant_strategies(game: NormalFormGame, player: str) -> list[tuple[str, str]]:
    """Strategies that weakly dominate every alternative.

    Each is tagged ``"strict"`` when it is strictly better against every
    opponent move versus every alternative, else ``"weak"``.  A player with a
    single strategy gets ``[(s, "weak")]`` by convention.
    """
    if player not in (ROW, COL):
        raise ValueError(f"player must be {ROW!r} or {COL!r}")
    nr, nc = game.shape
    mine, theirs = (nr, nc) if player == ROW else (nc, nr)
    names = game.row_strategies if player == ROW else game.col_strategies

    def pay(s, t):
        return game.u(ROW, s, t) if player == ROW else game.u(COL, t, s)

    if mine == 1:
        return [(names[0], "weak")]
    out = []
    for s in range(mine):
        dominates_all, strict = True, True
        for alt in range(mine):
            if alt == s:
                continue
            diffs = [pay(s, t) - pay(alt, t) for t in range(theirs)]
            if min(diffs) < 0 or max(diffs) <= 0:
                dominates_all = False
                break
            strict = strict and min(diffs) > 0
        if dominates_all:
            out.append((names[s], "strict" if strict else "weak"))
    return out


def deterrence_threshold(game: NormalFormGame, deterred: str,
                         target: tuple[str, str]) -> DeterrenceResult:
    """Smallest uniform penalty on the ``deterred`` row restoring ``target``.

    With penalty ``d`` subtracted from every row payoff of the deterred
    strategy, ``target`` must be a pure equilibrium of the full game and no
    equilibrium may use the deterred row.  The target must already be an
    equilibrium of the game with that row removed.  Exact inputs (ints,
    Fractions) give an exact threshold.
    """
    reduced = game.without_row(deterred)
    if not _is_equilibrium(reduced, *reduced.profile_indices(target)):
        raise GameError(
            f"{target} is not a pure equilibrium once {deterred!r} is removed"
        )
    d = game.index(ROW, deterred)
    tr, tc = game.profile_indices(target)
    nr, nc = game.shape
    others = [k for k in range(nr) if k != d]

    # (bound, is_open): penalty must be >= bound (closed) or > bound (open)
    bounds = [(0, False)]
    # target's row player must not prefer the penalised row
    bounds.append((game.u(ROW, d, tc) - game.u(ROW, tr, tc), False))
    # every cell of the deterred row that could be an equilibrium must be broken
    for c in range(nc):
        col_best = all(game.u(COL, d, c) >= game.u(COL, d, k) for k in range(nc))
        if col_best:
            bounds.append((game.u(ROW, d, c) - max(game.u(ROW, k, c) for k in others), True))
    threshold = max(b for b, _ in bounds)
    is_open = any(o for b, o in bounds if b == threshold)
    return DeterrenceResult(game.row_strategies[d], tuple(target), threshold, is_open)


def game_from_scenario(scenario: Scenario, row_agent: str, col_agent: str,
                       row_caps: Sequence[str], col_caps: Sequence[str],
                       origin: str) -> NormalFormGame:
    """Each player picks one of their capabilities or ``pass``.

    The row move is applied first, then the column move, starting from
    ``origin``; payoffs are the two agents' local values at the result.
    """
    scenario.require_agent(row_agent)
    scenario.require_agent(col_agent)
    scenario.require_state(origin)

    def moves(agent, names):
        caps = []
        for name in names:
            if name == PASS:
                raise GameError(f"{PASS!r} is reserved for the do-nothing strategy")
            cap = scenario.capability(name)
            if cap.owner != agent:
                raise GameError(f"capability {name!r} belongs to {cap.owner!r}, not {agent!r}")
            caps.append(cap)
        return caps + [None]

    rows, cols = moves(row_agent, row_caps), moves(col_agent, col_caps)
    vr, vc = scenario.values[row_agent], scenario.values[col_agent]
    payoffs = []
    for rm in rows:
        mid = rm.apply(origin) if rm else origin
        line = []
        for cm in cols:
            end = cm.apply(mid) if cm else mid
            line.append((vr[end], vc[end]))
        payoffs.append(tuple(line))
    return NormalFormGame(
        tuple(row_caps) + (PASS,), tuple(col_caps) + (PASS,), tuple(payoffs)
    )


# -- file format -------------------------------------------------------------

_GAME_KEYS = {"row_strategies", "col_strategies", "payoffs", "row_aliases", "col_aliases"}


def _number(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise GameError(f"payoff {x!r} is not a number")
    return x


def load_game(text: str) -> NormalFormGame:
    """Parse game JSON; ``payoffs`` is a row-major flat array of ``[r, c]`` pairs."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise GameError("game must be a JSON object")
    extra = sorted(set(doc) - _GAME_KEYS)
    if extra:
        raise GameError(f"unknown key(s): {', '.join(extra)}")
    try:
        rows = tuple(doc["row_strategies"])
        cols = tuple(doc["col_strategies"])
        flat = doc["payoffs"]
    except KeyError as exc:
        raise GameError(f"missing key {exc.args[0]!r}") from None
    if not all(isinstance(s, str) for s in rows + cols):
        raise GameError("strategy names must be strings")
    if not isinstance(flat, list) or len(flat) != len(rows) * len(cols):
        raise GameError(
            f"payoffs must list {len(rows)}x{len(cols)} = {len(rows) * len(cols)} pairs"
        )
    cells = []
    for cell in flat:
        if not isinstance(cell, list) or len(cell) != 2:
            raise GameError(f"payoff cell {cell!r} must be a [row, column] pair; only two players")
        cells.append((_number(cell[0]), _number(cell[1])))
    matrix = tuple(tuple(cells[r * len(cols):(r + 1) * len(cols)]) for r in range(len(rows)))
    return NormalFormGame(rows, cols, matrix,
                          dict(doc.get("row_aliases", {})), dict(doc.get("col_aliases", {})))


def dump_game(game: NormalFormGame) -> str:
    doc = {
        "row_strategies": list(game.row_strategies),
        "col_strategies": list(game.col_strategies),
        "payoffs": [list(cell) for row in game.payoffs for cell in row],
    }
    if game.row_aliases:
        doc["row_aliases"] = dict(game.row_aliases)
    if game.col_aliases:
        doc["col_aliases"] = dict(game.col_aliases)
    return json.dumps(doc, indent=2) + "\n"

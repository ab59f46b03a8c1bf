"""Turn-based play semantics: positions, legal moves, traces and the referee.

A round is one Adam move followed by one Eve move, Adam first from the
initial position.  Eve wins the instant the vector is zero after her move;
for games with states any control state qualifies.  A stuck Eve counts as an
Adam win.  Matrix games are played through the (u, 1, v) embedding and need
no engine of their own.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .models import (
    FlaggedState,
    RgsGame,
    RgsMove,
    RobotGame,
    RobotGamesError,
    Vec2,
    check_int_cap,
)

Game = Union[RgsGame, RobotGame]
MoveType = Union[Vec2, RgsMove]


class IllegalMove(RobotGamesError):
    pass


class StrategyError(RobotGamesError):
    """A strategy proposed an illegal move; a test-failure signal, not game data."""


class Turn(Enum):
    ADAM = "adam"
    EVE = "eve"


@dataclass(frozen=True)
class Position:
    turn: Turn
    eve_state: Optional[FlaggedState]
    vector: Vec2


def initial_position(game: Game) -> Position:
    if isinstance(game, RgsGame):
        return Position(Turn.ADAM, game.initial_state, game.initial_vec)
    return Position(Turn.ADAM, None, game.initial)


def legal_moves(game: Game, pos: Position) -> list[MoveType]:
    """Moves available to the player to act; an empty list is a legal answer."""
    if pos.turn is Turn.ADAM:
        return sorted(game.adam_moves, key=lambda v: (v.x, v.y))
    if isinstance(game, RgsGame):
        return sorted(
            (mv for mv in game.eve_moves if mv.src == pos.eve_state),
            key=lambda mv: (mv.vec.x, mv.vec.y, mv.dst.render()),
        )
    return sorted(game.eve_moves, key=lambda v: (v.x, v.y))


def apply(game: Game, pos: Position, move: MoveType) -> Position:
    """Add the move vector, update Eve's state on her stateful moves, flip the turn."""
    if pos.turn is Turn.ADAM:
        if not isinstance(move, Vec2) or move not in game.adam_moves:
            raise IllegalMove("not one of Adam's moves: %s" % (move,))
        vec = pos.vector + move
        check_int_cap(vec.x, vec.y)
        return Position(Turn.EVE, pos.eve_state, vec)
    if isinstance(game, RgsGame):
        if not isinstance(move, RgsMove) or move not in game.eve_moves:
            raise IllegalMove("not one of Eve's moves: %s" % (move,))
        if move.src != pos.eve_state:
            raise IllegalMove("move from %s proposed at %s" % (move.src, pos.eve_state))
        vec = pos.vector + move.vec
        check_int_cap(vec.x, vec.y)
        return Position(Turn.ADAM, move.dst, vec)
    if not isinstance(move, Vec2) or move not in game.eve_moves:
        raise IllegalMove("not one of Eve's moves: %s" % (move,))
    vec = pos.vector + move
    check_int_cap(vec.x, vec.y)
    return Position(Turn.ADAM, None, vec)


class VerdictKind(Enum):
    EVE_WINS = "eve-wins"
    ONGOING = "ongoing"
    EVE_STUCK = "eve-stuck"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    round: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is VerdictKind.ONGOING:
            return "ongoing"
        return "%s at round %d" % (self.kind.value, self.round)


@dataclass(frozen=True)
class PlayTrace:
    positions: tuple[Position, ...]
    moves: tuple[MoveType, ...]
    verdict: Verdict

    def eve_turn_positions(self) -> list[tuple[int, Position]]:
        """(round, position) pairs at the start of each Eve turn, 1-based rounds."""
        return [
            (i // 2 + 1, p) for i, p in enumerate(self.positions)
            if p.turn is Turn.EVE
        ]


def play(game: Game, adam_strategy, eve_strategy, max_rounds: int) -> PlayTrace:
    """Alternate the two strategies from the initial position and referee the result.

    Both strategies observe every applied move.  A strategy proposing an
    illegal move raises StrategyError.
    """
    pos = initial_position(game)
    adam_strategy.begin(game, pos)
    eve_strategy.begin(game, pos)
    positions = [pos]
    moves: list[MoveType] = []

    def step(strategy) -> None:
        nonlocal pos
        move = strategy.propose()
        try:
            nxt = apply(game, pos, move)
        except IllegalMove as exc:
            raise StrategyError(str(exc)) from exc
        moves.append(move)
        positions.append(nxt)
        pos = nxt
        adam_strategy.observe(move)
        eve_strategy.observe(move)

    for rnd in range(1, max_rounds + 1):
        step(adam_strategy)
        if not legal_moves(game, pos):
            return PlayTrace(tuple(positions), tuple(moves),
                             Verdict(VerdictKind.EVE_STUCK, rnd))
        step(eve_strategy)
        if pos.vector.is_zero():
            return PlayTrace(tuple(positions), tuple(moves),
                             Verdict(VerdictKind.EVE_WINS, rnd))
    return PlayTrace(tuple(positions), tuple(moves), Verdict(VerdictKind.ONGOING))


def replay(game: Game, moves, start: Optional[Position] = None) -> list[Position]:
    """Positions visited when pushing recorded moves through apply."""
    pos = start if start is not None else initial_position(game)
    out = [pos]
    for mv in moves:
        pos = apply(game, pos, mv)
        out.append(pos)
    return out

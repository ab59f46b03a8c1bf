"""Deterministic strategies extracted from the correctness arguments.

Each strategy is a history-observing move proposer: it is initialized with
the game context, observes every applied move (its own included), and
proposes a move when asked.  Identical observation histories give identical
proposals.

The two referees track play through a ledger of observed moves rather than
by decoding raw integers: base-8 coefficient decoding is ambiguous once
coefficients go negative, and the history determines them exactly.
"""

from __future__ import annotations

from typing import Callable, Optional

from . import engine
from .models import (
    Flag,
    FlaggedState,
    MachineConfig,
    RgsGame,
    RgsMove,
    RobotGamesError,
    Vec2,
    flag_of,
    sim_state,
    step_machine,
    top_state,
)
from .reductions import (
    ADAM_CHECK,
    ADAM_ZERO,
    CANCEL,
    DEFENCE,
    FINISH,
    GADGET,
    GADGET_CHECK,
    REGULAR,
    FlaggedMachine,
    MoveForm,
    Pipeline,
    RgLedger,
    first_step,
    form_vector,
)


class NoApplicableMove(RobotGamesError):
    """The scripted strategy has no move for this history; a harness setup error."""


class Strategy:
    """Base class handling ply bookkeeping; subclasses implement the policy."""

    def begin(self, game, position) -> None:
        self.game = game
        self.position = position
        self.ply = 0
        self._begin()

    def _begin(self) -> None:
        pass

    def observe(self, move) -> None:
        mover_is_adam = self.ply % 2 == 0
        self.position = engine.apply(self.game, self.position, move)
        self._observe(mover_is_adam, move)
        self.ply += 1

    def _observe(self, mover_is_adam: bool, move) -> None:
        pass

    def propose(self):
        raise NotImplementedError

    @property
    def round(self) -> int:
        """1-based round of the ply about to be played."""
        return self.ply // 2 + 1


class _MachineMirror:
    """Honest-line bookkeeping: the machine configuration a play position encodes."""

    def __init__(self, mf: FlaggedMachine):
        self.mf = mf
        self.cfg = first_step(mf.base)

    @property
    def flagged(self) -> FlaggedState:
        return sim_state(self.cfg.state, self.cfg.c1, self.cfg.c2)

    def expected_move(self) -> Optional[RgsMove]:
        """The one correct simulating move, or None at the sink."""
        nxt = step_machine(self.mf.base, self.cfg)
        if nxt is None:
            return None
        vec = Vec2(4 * (nxt.c1 - self.cfg.c1), nxt.c2 - self.cfg.c2)
        return RgsMove(self.flagged, vec, sim_state(nxt.state, nxt.c1, nxt.c2))

    def advance(self) -> None:
        nxt = step_machine(self.mf.base, self.cfg)
        assert nxt is not None
        self.cfg = nxt


def _drain_delta(c1: int, c2: int, e: int) -> tuple[Vec2, int, int]:
    """Emptying-move vector and counter drains for one round, given Adam's x part."""
    d1 = 1 if c1 > 0 else 0
    d2 = 1 if c2 > 0 else 0
    return Vec2(-4 * d1 - e, -d2), d1, d2


class EveRgsHonest(Strategy):
    """Simulate the machine while Adam waits; empty both counters once he checks.

    On decrement branches the target flags are chosen to match the counter
    signs after the move.  The first positivity check is answered with the
    bridge move into the emptying family, after which every round cancels
    Adam's addition and drains one unit per positive counter.
    """

    def __init__(self, mf: FlaggedMachine, game: RgsGame):
        self.mf = mf
        self.rgs = game

    def _begin(self) -> None:
        self.mirror = _MachineMirror(self.mf)
        self.adam_last = ADAM_ZERO
        self.draining = False
        self.top = None
        self.c1 = 0
        self.c2 = 0
        self._pending: Optional[Callable[[], None]] = None

    def _observe(self, mover_is_adam: bool, move) -> None:
        if mover_is_adam:
            self.adam_last = move
        elif self._pending is not None:
            self._pending()
            self._pending = None

    def propose(self) -> RgsMove:
        if not self.draining:
            if self.adam_last == ADAM_CHECK:
                here = self.mirror.flagged
                move = RgsMove(here, Vec2(-1, 0), top_state(here.f1, here.f2))
                c1, c2 = self.mirror.cfg.counters
                self._pending = lambda: self._enter_drain(move.dst, c1, c2)
                return move
            move = self.mirror.expected_move()
            if move is None:
                raise NoApplicableMove("machine is at the sink; nothing to simulate")
            self._pending = self.mirror.advance
            return move
        vec, d1, d2 = _drain_delta(self.c1, self.c2, self.adam_last.x)
        target = top_state(flag_of(self.c1 - d1), flag_of(self.c2 - d2))
        move = RgsMove(self.top, vec, target)
        self._pending = lambda: self._drained(target, d1, d2)
        return move

    def _enter_drain(self, top: FlaggedState, c1: int, c2: int) -> None:
        self.draining = True
        self.top = top
        self.c1, self.c2 = c1, c2

    def _drained(self, target: FlaggedState, d1: int, d2: int) -> None:
        self.top = target
        self.c1 -= d1
        self.c2 -= d2


class AdamRgsReferee(Strategy):
    """Wait while Eve simulates honestly; punish the first wrong move.

    After the punishment begins the policy is positional: check unless the
    first counter is 3 modulo 4.  This keeps the counter away from 0 modulo 4
    at the start of every Eve turn, whatever she does.
    """

    def __init__(self, mf: FlaggedMachine, game: RgsGame):
        self.mf = mf
        self.rgs = game

    def _begin(self) -> None:
        self.mirror = _MachineMirror(self.mf)
        self.punished_round: Optional[int] = None

    def _observe(self, mover_is_adam: bool, move) -> None:
        if mover_is_adam or self.punished_round is not None:
            return
        if move == self.mirror.expected_move():
            self.mirror.advance()
        else:
            self.punished_round = (self.ply + 1) // 2

    def propose(self) -> Vec2:
        if self.punished_round is None:
            return ADAM_ZERO
        return ADAM_ZERO if self.position.vector.x % 4 == 3 else ADAM_CHECK


class EveRgHonest(Strategy):
    """The stateless mirror of the honest strategy, via the base-8 encoding.

    Regular play follows the simulation images; when the configuration
    reaches both-zero the finishing move clears the state coefficient and the
    bookkeeping token while subtracting Adam's last vector.  A state check is
    answered by the matching state-defence move, then the emptying rows
    cancel whatever Adam plays while the counters drain.
    """

    def __init__(self, ctx: Pipeline):
        self.ctx = ctx

    def _begin(self) -> None:
        self.mirror = _MachineMirror(self.ctx.flagged)
        self.adam_last = ADAM_ZERO
        self.draining = False
        self.top = None
        self.c1 = 0
        self.c2 = 0
        self.checks = {self.ctx.check_vec(i): i for i in self.ctx.numbering.t_indices}
        self._pending: Optional[Callable[[], None]] = None

    def _observe(self, mover_is_adam: bool, move) -> None:
        if mover_is_adam:
            self.adam_last = move
        elif self._pending is not None:
            self._pending()
            self._pending = None

    def _vec(self, form: MoveForm) -> Vec2:
        return form_vector(self.ctx.numbering, form)

    def _idx(self, state: FlaggedState) -> int:
        return self.ctx.numbering.of(state)

    def propose(self) -> Vec2:
        check_i = self.checks.get(self.adam_last)
        if not self.draining:
            return self._propose_sim(check_i)
        return self._propose_drain(check_i)

    def _propose_sim(self, check_i: Optional[int]) -> Vec2:
        here = self.mirror.flagged
        if self.mirror.cfg.counters == (0, 0):
            if check_i is None:
                return self._vec(MoveForm(FINISH, move=(self._idx(here), 0),
                                          alpha=self.adam_last))
            return self._vec(MoveForm(DEFENCE, move=(self._idx(here), 0), check=check_i))
        if check_i is not None:
            k = top_state(here.f1, here.f2)
            if self._idx(k) == check_i:
                k = top_state(here.f1, here.f2, primed=True)
            c1, c2 = self.mirror.cfg.counters
            self._pending = lambda: self._enter_drain(k, c1, c2)
            return self._vec(MoveForm(DEFENCE, move=(self._idx(here), self._idx(k)),
                                      check=check_i))
        if self.adam_last == ADAM_CHECK:
            k = top_state(here.f1, here.f2)
            c1, c2 = self.mirror.cfg.counters
            self._pending = lambda: self._enter_drain(k, c1, c2)
            return self._vec(MoveForm(REGULAR, add1=-1,
                                      move=(self._idx(here), self._idx(k))))
        move = self.mirror.expected_move()
        if move is None:
            raise NoApplicableMove("machine is at the sink; nothing to simulate")
        self._pending = self.mirror.advance
        return self._vec(MoveForm(REGULAR, add1=move.vec.x, add2=move.vec.y,
                                  move=(self._idx(move.src), self._idx(move.dst))))

    def _propose_drain(self, check_i: Optional[int]) -> Vec2:
        j = self.top
        d1 = 1 if self.c1 > 0 else 0
        d2 = 1 if self.c2 > 0 else 0
        post = (self.c1 - d1, self.c2 - d2)
        level = (j.f1, j.f2)
        post_level = (flag_of(post[0]), flag_of(post[1]))

        if check_i is None:
            if post == (0, 0):
                target = None
                form = MoveForm(GADGET, add1=-4 * d1, add2=-d2,
                                move=(self._idx(j), 0), alpha=self.adam_last)
            elif post_level == level:
                target = top_state(j.f1, j.f2, primed=not j.primed)
                form = MoveForm(GADGET, add1=-4 * d1, add2=-d2,
                                move=(self._idx(j), self._idx(target)),
                                alpha=self.adam_last)
            else:
                target = top_state(*post_level)
                form = MoveForm(GADGET, add1=-4 * d1, add2=-d2,
                                move=(self._idx(j), self._idx(target)),
                                alpha=self.adam_last)
        else:
            if post == (0, 0):
                target = None
                form = MoveForm(GADGET_CHECK, add1=-4 * d1, add2=-d2,
                                move=(self._idx(j), 0), check=check_i)
            elif post_level == level:
                partner = top_state(j.f1, j.f2, primed=not j.primed)
                if level == (Flag.PLUS, Flag.PLUS) and self._idx(partner) != check_i:
                    target = partner
                    form = MoveForm(GADGET_CHECK, add1=-4, add2=-1,
                                    move=(self._idx(j), self._idx(target)),
                                    check=check_i)
                else:
                    # stay put: cancel the check and drain in place
                    target = j
                    form = MoveForm(CANCEL, add1=-4 * d1, add2=-d2, check=check_i)
            else:
                target = top_state(*post_level)
                if self._idx(target) == check_i:
                    target = top_state(*post_level, primed=True)
                form = MoveForm(GADGET_CHECK, add1=-4 * d1, add2=-d2,
                                move=(self._idx(j), self._idx(target)),
                                check=check_i)

        final_target = target
        self._pending = lambda: self._drained(final_target, d1, d2)
        return self._vec(form)

    def _enter_drain(self, top: FlaggedState, c1: int, c2: int) -> None:
        self.draining = True
        self.top = top
        self.c1, self.c2 = c1, c2

    def _drained(self, target: Optional[FlaggedState], d1: int, d2: int) -> None:
        if target is not None:
            self.top = target
        self.c1 -= d1
        self.c2 -= d2


class AdamRgReferee(Strategy):
    """Wait while Eve's stateless play matches the honest line; then pin her down.

    A coefficient ledger built from the observed move history tracks the
    state coefficients, the check budget and the second-counter units.  After
    the first wrong move the policy keeps the second counter, modulo 4*8^n,
    out of [0, 8^n) at the start of every Eve turn: check from inside that
    interval (always safe), wait inside [3*8^n, 4*8^n), and otherwise check
    only when some check index provably lands outside the protected interval,
    preferring indices whose ledger coefficient is nonzero.
    """

    def __init__(self, ctx: Pipeline):
        self.ctx = ctx

    def _begin(self) -> None:
        self.mirror = _MachineMirror(self.ctx.flagged)
        self.punished_round: Optional[int] = None
        self.ledger = RgLedger(self.ctx)
        self.my_last = ADAM_ZERO

    def _expected(self) -> Optional[Vec2]:
        num = self.ctx.numbering
        here = self.mirror.flagged
        if self.mirror.cfg.counters == (0, 0):
            return form_vector(num, MoveForm(FINISH, move=(num.of(here), 0),
                                             alpha=self.my_last))
        move = self.mirror.expected_move()
        if move is None:
            return None
        return form_vector(num, MoveForm(
            REGULAR, add1=move.vec.x, add2=move.vec.y,
            move=(num.of(move.src), num.of(move.dst))))

    def _observe(self, mover_is_adam: bool, move) -> None:
        if mover_is_adam:
            self.my_last = move
            self.ledger.apply_adam(move)
            return
        if self.punished_round is None:
            if move == self._expected():
                if self.mirror.cfg.counters != (0, 0):
                    self.mirror.advance()
            else:
                self.punished_round = (self.ply + 1) // 2
        self.ledger.apply_eve(move)

    def propose(self) -> Vec2:
        if self.punished_round is None:
            return ADAM_ZERO
        num = self.ctx.numbering
        en = self.ctx.eight_n
        modulus = self.ctx.modulus
        v = self.position.vector.y % modulus
        nonzero = self.ledger.nonzero_t()
        preference = nonzero + [i for i in reversed(num.t_indices) if i not in nonzero]
        if v < en:
            return self.ctx.check_vec(preference[0])
        if 3 * en <= v:
            return ADAM_ZERO
        for i in preference:
            if (v - 5 * 8 ** i - en) % modulus >= en:
                return self.ctx.check_vec(i)
        return ADAM_ZERO


# ---------------------------------------------------------------------------
# Scripted strategies for the verification harness
# ---------------------------------------------------------------------------

class AdamScript(Strategy):
    """Plays script(round); rounds are 1-based."""

    def __init__(self, script: Callable[[int], Vec2]):
        self.script = script

    def propose(self) -> Vec2:
        return self.script(self.round)


def adam_all_zero() -> AdamScript:
    return AdamScript(lambda r: ADAM_ZERO)


class DeviationEve(Strategy):
    """Follow a base strategy, play one fixed deviation, then scramble for zero.

    The post-deviation policy is deterministic: take an immediately winning
    move when one exists, otherwise head greedily toward the origin.  The
    exhaustive no-win guarantee comes from the solver, not from this policy;
    this exists to drive referee traces.
    """

    def __init__(self, base: Strategy, deviate_round: int, deviation):
        self.base = base
        self.deviate_round = deviate_round
        self.deviation = deviation

    def _begin(self) -> None:
        self.base.begin(self.game, self.position)
        self.deviated = False

    def _observe(self, mover_is_adam: bool, move) -> None:
        if not self.deviated:
            self.base.observe(move)

    def propose(self):
        if self.deviated:
            return self._survive()
        if self.round == self.deviate_round:
            self.deviated = True
            return self.deviation
        return self.base.propose()

    def _survive(self):
        options = engine.legal_moves(self.game, self.position)
        if not options:
            raise NoApplicableMove("no legal move for the deviating strategy")

        def resulting(move) -> Vec2:
            vec = move.vec if isinstance(move, RgsMove) else move
            return self.position.vector + vec

        def key(move):
            after = resulting(move)
            order = (move.vec.x, move.vec.y, move.dst.render()) if isinstance(move, RgsMove) \
                else (move.x, move.y)
            return (abs(after.x) + abs(after.y), order)

        for move in options:
            if resulting(move).is_zero():
                return move
        return min(options, key=key)


# spec'd CLI-addressable factories

def eve_rgs_strategy(mf: FlaggedMachine, game: RgsGame) -> EveRgsHonest:
    return EveRgsHonest(mf, game)


def adam_rgs_referee(mf: FlaggedMachine, game: RgsGame) -> AdamRgsReferee:
    return AdamRgsReferee(mf, game)


def eve_rg_strategy(ctx: Pipeline) -> EveRgHonest:
    return EveRgHonest(ctx)


def adam_rg_referee(ctx: Pipeline) -> AdamRgReferee:
    return AdamRgReferee(ctx)

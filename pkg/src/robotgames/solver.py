"""Independent game oracles and the lemma-verification harness.

The oracles know nothing about the scripted strategies: minimax is an
exhaustive memoized search over rounds, the attractor is a fixpoint of
controlled predecessors over a box.  Positions whose play leaves the box
count as lost for Eve, so both are sound under-approximations: a reported
Eve win is real, a reported no-win is relative to the bounds.

For stateless pipeline games the raw move sets are far too wide to search
over integer vectors, so the deviation harness runs the same bounded minimax
over the base-8 ledger decomposition of positions, with component-wise boxes
scaled against 4*8^n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

from . import engine
from .engine import Position, PlayTrace, Turn, Verdict, VerdictKind
from .models import (
    MinskyMachine,
    OutcomeKind,
    RgsGame,
    RgsMove,
    RobotGame,
    RobotGamesError,
    Vec2,
    run_machine,
)
from .reductions import (
    ADAM_CHECK,
    ADAM_ZERO,
    Pipeline,
    RgLedger,
    compile_pipeline,
)
from . import strategies as strat


class SolveVerdict:
    EVE_WINS = "eve-wins-within"
    NO_WIN = "no-eve-win-within"


@dataclass(frozen=True)
class WitnessNode:
    """Eve's winning replies, one per Adam move; None child means the reply wins."""
    replies: dict


@dataclass(frozen=True)
class SolveResult:
    verdict: str
    rounds: int
    witness: Optional[WitnessNode] = None

    @property
    def eve_wins(self) -> bool:
        return self.verdict == SolveVerdict.EVE_WINS


class _BoundedSearch:
    """Round-based AND/OR search with memoization, generic over the state shape.

    `feasible(state, rounds_left)` is a sound necessary condition for Eve to
    win within the budget; returning False prunes the subtree as a loss.
    """

    def __init__(self, adam_moves, eve_moves, apply_move, is_target, in_box,
                 feasible=None):
        self.adam_moves = adam_moves
        self.eve_moves = eve_moves
        self.apply_move = apply_move
        self.is_target = is_target
        self.in_box = in_box
        self.feasible = feasible or (lambda s, r: True)
        self.memo: dict = {}

    def win_rounds(self, state, horizon: int) -> Optional[int]:
        """Minimal rounds within horizon in which Eve forces the target, else None."""
        if self.is_target(state):
            return 0
        if horizon <= 0 or not self.feasible(state, horizon):
            return None
        key = (state, horizon)
        if key in self.memo:
            return self.memo[key]
        self.memo[key] = None  # cycle guard: revisiting within the same budget
        adam_options = self.adam_moves(state)
        if not adam_options:
            return None  # the round cannot proceed, Eve never reaches the target
        worst = 0
        result: Optional[int] = 0
        for a in adam_options:
            s1 = self.apply_move(state, a)
            best: Optional[int] = None
            for e in self.eve_moves(s1):
                s2 = self.apply_move(s1, e)
                if not self.in_box(s2):
                    continue
                if self.is_target(s2):
                    best = 1
                    break
                sub = self.win_rounds(s2, horizon - 1)
                if sub is not None and (best is None or sub + 1 < best):
                    best = sub + 1
            if best is None:
                result = None
                break
            worst = max(worst, best)
        if result is not None:
            result = worst
        self.memo[key] = result
        return result

    def witness(self, state, horizon: int) -> Optional[WitnessNode]:
        """Reconstruct one winning reply per Adam move from the memo."""
        need = self.win_rounds(state, horizon)
        if need is None:
            return None
        replies = {}
        for a in self.adam_moves(state):
            s1 = self.apply_move(state, a)
            pick = None
            for e in self.eve_moves(s1):
                s2 = self.apply_move(s1, e)
                if not self.in_box(s2):
                    continue
                if self.is_target(s2):
                    pick = (e, None, s2)
                    break
                sub = self.win_rounds(s2, horizon - 1)
                if sub is not None and sub + 1 <= need:
                    pick = (e, self.witness(s2, horizon - 1), s2)
                    break
            assert pick is not None
            replies[a] = pick
        return WitnessNode(replies)


def _vector_search(game, box) -> _BoundedSearch:
    if box is None:
        bx = by = None
    elif isinstance(box, tuple):
        bx, by = box
    else:
        bx = by = box

    def in_box(pos: Position) -> bool:
        if bx is None:
            return True
        return abs(pos.vector.x) <= bx and abs(pos.vector.y) <= by

    # per-round reach: the origin is out of range once a coordinate exceeds it
    adam_vecs = list(game.adam_moves)
    eve_vecs = [mv.vec for mv in game.eve_moves] if isinstance(game, RgsGame) \
        else list(game.eve_moves)
    dx = max((abs(v.x) for v in adam_vecs), default=0) + \
        max((abs(v.x) for v in eve_vecs), default=0)
    dy = max((abs(v.y) for v in adam_vecs), default=0) + \
        max((abs(v.y) for v in eve_vecs), default=0)

    def feasible(pos: Position, rounds_left: int) -> bool:
        return (abs(pos.vector.x) <= dx * rounds_left
                and abs(pos.vector.y) <= dy * rounds_left)

    return _BoundedSearch(
        adam_moves=lambda pos: engine.legal_moves(game, pos),
        eve_moves=lambda pos: engine.legal_moves(game, pos),
        apply_move=lambda pos, mv: engine.apply(game, pos, mv),
        is_target=lambda pos: pos.turn is Turn.ADAM and pos.vector.is_zero(),
        in_box=in_box,
        feasible=feasible,
    )


def minimax_winner(game, pos: Position, horizon: int, box=None,
                   want_witness: bool = False) -> SolveResult:
    """Decide whether Eve can force the origin within `horizon` rounds.

    Exhaustive over both players with memoization on positions.  `box` bounds
    both coordinates (one int or an (x, y) pair); leaving it is a loss for
    Eve, so wins are sound and no-wins are relative to the box.
    """
    if pos.turn is not Turn.ADAM:
        raise ValueError("minimax positions start a round, with Adam to move")
    search = _vector_search(game, box)
    k = search.win_rounds(pos, horizon)
    if k is None:
        return SolveResult(SolveVerdict.NO_WIN, horizon)
    witness = search.witness(pos, horizon) if want_witness else None
    return SolveResult(SolveVerdict.EVE_WINS, k, witness)


# ---------------------------------------------------------------------------
# Attractor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Positions from which Eve can force the origin without leaving the box."""
    bound: int
    rank: dict  # position -> fixpoint stage (plies)

    def __contains__(self, pos: Position) -> bool:
        return pos in self.rank


def attractor(game, bound: int) -> Region:
    """Least fixpoint of controlled predecessors inside the box [-B, B]^2."""
    states = [None]
    if isinstance(game, RgsGame):
        states = list(game.eve_states)
    coords = range(-bound, bound + 1)
    positions = [
        Position(turn, s, Vec2(x, y))
        for turn in (Turn.ADAM, Turn.EVE)
        for s in states
        for x in coords
        for y in coords
    ]
    if len(positions) > 2_000_000:
        raise RobotGamesError("attractor box too large to enumerate")

    rank: dict[Position, int] = {}
    for pos in positions:
        if pos.turn is Turn.ADAM and pos.vector.is_zero():
            rank[pos] = 0

    changed = True
    stage = 0
    while changed:
        changed = False
        stage += 1
        for pos in positions:
            if pos in rank:
                continue
            succs = [engine.apply(game, pos, mv) for mv in engine.legal_moves(game, pos)]
            if pos.turn is Turn.EVE:
                ok = any(s in rank for s in succs)
            else:
                ok = bool(succs) and all(s in rank for s in succs)
            if ok:
                rank[pos] = stage
                changed = True
    return Region(bound, rank)


# ---------------------------------------------------------------------------
# Symbolic bounded search for pipeline stateless games
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymBox:
    """Component-wise bounds on the ledger decomposition of a position."""
    x_abs: int
    units_min: int
    units_max: int
    quarters_abs: int
    coeff_abs: int
    coeff_sum: int


@dataclass(frozen=True)
class SymState:
    x: int
    y: int
    units: int
    quarters: int
    coeff: tuple  # sorted (index, value) pairs, zero-free

    @staticmethod
    def pack(x, y, units, quarters, coeff: dict) -> "SymState":
        items = tuple(sorted((p, c) for p, c in coeff.items() if c != 0))
        return SymState(x, y, units, quarters, items)


def sym_state_of_ledger(ledger: RgLedger, x: int) -> SymState:
    return SymState.pack(x, ledger.y_value(), ledger.units, ledger.quarters,
                         dict(ledger.coeff))


@dataclass(frozen=True)
class _SymMove:
    dx: int
    dy: int
    d_units: int
    d_quarters: int
    d_coeff: tuple


class SymbolicRgSearch:
    """Bounded minimax over ledger states of one pipeline stateless game.

    Besides the component boxes, search subtrees are cut by necessary
    conditions for a win within the remaining budget, all read off the move
    set itself: the token coefficient never decreases, the simulation-block
    coefficient sum never increases, every Eve move repairs at most one
    second-counter unit, one check quarter and one simulation deficit, and
    the first coordinate moves at most 6 per round.  The memo is shared
    across calls, so sweeping many nearby start states recombines heavily.
    """

    def __init__(self, ctx: Pipeline, box: SymBox):
        self.ctx = ctx
        self.box = box
        en = ctx.eight_n
        self.sim_lo = 1
        self.sim_hi = ctx.numbering.n - 7  # simulation indices are 1..m
        self.eve_syms = []
        for vec, form in sorted(ctx.move_table.items(), key=lambda kv: (kv[0].x, kv[0].y)):
            d: dict[int, int] = {}
            if form.move is not None:
                j, k = form.move
                d[j] = d.get(j, 0) - 1
                d[k] = d.get(k, 0) + 1
            dq = 0
            if form.check is not None:
                d[form.check] = d.get(form.check, 0) + 5
                dq = 1
            sym = _SymMove(vec.x, vec.y, form.add2, dq, tuple(sorted(d.items())))
            assert vec.y == 4 * en * form.add2 + en * dq + sum(
                c * 8 ** p for p, c in d.items())
            self.eve_syms.append(sym)
        check_idx = {ctx.check_vec(j): j for j in ctx.numbering.t_indices}
        self.adam_syms = []
        for vec in sorted(ctx.rg.adam_moves, key=lambda v: (v.x, v.y)):
            idx = check_idx.get(vec)
            if idx is None:
                self.adam_syms.append(_SymMove(vec.x, vec.y, 0, 0, ()))
            else:
                self.adam_syms.append(_SymMove(vec.x, vec.y, 0, -1, ((idx, -5),)))
        self.search = _BoundedSearch(
            adam_moves=lambda s: self.adam_syms,
            eve_moves=lambda s: self.eve_syms,
            apply_move=self._apply,
            is_target=lambda s: s.x == 0 and s.y == 0,
            in_box=self._in_box,
            feasible=self._feasible,
        )

    def win_rounds(self, state: SymState, horizon: int) -> Optional[int]:
        return self.search.win_rounds(state, horizon)

    def _apply(self, s: SymState, mv: _SymMove) -> SymState:
        coeff = dict(s.coeff)
        for p, c in mv.d_coeff:
            v = coeff.get(p, 0) + c
            if v:
                coeff[p] = v
            else:
                coeff.pop(p, None)
        return SymState(s.x + mv.dx, s.y + mv.dy, s.units + mv.d_units,
                        s.quarters + mv.d_quarters, tuple(sorted(coeff.items())))

    def _in_box(self, s: SymState) -> bool:
        b = self.box
        if abs(s.x) > b.x_abs:
            return False
        if not (b.units_min <= s.units <= b.units_max):
            return False
        if abs(s.quarters) > b.quarters_abs:
            return False
        total = 0
        for _, c in s.coeff:
            if abs(c) > b.coeff_abs:
                return False
            total += abs(c)
        return total <= b.coeff_sum

    def _feasible(self, s: SymState, rounds_left: int) -> bool:
        if abs(s.units) > rounds_left or abs(s.quarters) > rounds_left:
            return False
        if abs(s.x) > 6 * rounds_left:
            return False
        token = 0
        sim_sum = 0
        sim_deficit = 0
        for p, c in s.coeff:
            if p == 0:
                token = c
            elif self.sim_lo <= p <= self.sim_hi:
                sim_sum += c
                if c < 0:
                    sim_deficit -= c
        if token > 0:
            return False  # nothing ever subtracts from the token slot
        if sim_sum < 0:
            return False  # the simulation block only ever loses total weight
        if sim_deficit > rounds_left or sim_sum > rounds_left:
            return False
        return True


def default_sym_box(ctx: Pipeline, machine_horizon: int = 64) -> SymBox:
    """Boxes wide enough for honest drains of the machine's reachable counters.

    An honest Eve turn holds at most the token, one state coefficient and one
    outstanding check (weight 7); the slack admits one deviation's worth of
    junk on top.
    """
    run = run_machine(ctx.machine, machine_horizon)
    c1_max = max(c.c1 for c in run.trace)
    c2_max = max(c.c2 for c in run.trace)
    return SymBox(
        x_abs=4 * (c1_max + 8),
        units_min=-2,
        units_max=c2_max + 2,
        quarters_abs=3,
        coeff_abs=6,
        coeff_sum=10,
    )


# ---------------------------------------------------------------------------
# The lemma harness
# ---------------------------------------------------------------------------

class ScenarioFailure(RobotGamesError):
    """A lemma scenario found a counterexample; carries the offending trace."""

    def __init__(self, message: str, trace: Optional[PlayTrace] = None):
        super().__init__(message)
        self.trace = trace


@dataclass
class LemmaReport:
    scenario: str
    cases: int = 0
    notes: list = field(default_factory=list)

    def note(self, text: str) -> None:
        self.notes.append(text)


SCENARIOS = ("L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8")

TRACE_PLIES = 24
TRACE_ROUNDS = TRACE_PLIES // 2
MINIMAX_HORIZON = 12


def machine_aligned_round(verdict_round: int) -> int:
    """Play rounds shifted by one: the initial position already encodes one step."""
    return verdict_round + 1


def _honest_pair(ctx: Pipeline, stateless: bool):
    if stateless:
        return strat.adam_all_zero(), strat.eve_rg_strategy(ctx)
    return strat.adam_all_zero(), strat.eve_rgs_strategy(ctx.flagged, ctx.rgs)


def _honest_trace(ctx: Pipeline, stateless: bool, rounds: int) -> PlayTrace:
    adam, eve = _honest_pair(ctx, stateless)
    game = ctx.rg if stateless else ctx.rgs
    return engine.play(game, adam, eve, rounds)


def _rgs_vector_box(ctx: Pipeline) -> tuple[int, int]:
    run = run_machine(ctx.machine, 64)
    c1_max = max(c.c1 for c in run.trace)
    c2_max = max(c.c2 for c in run.trace)
    return (4 * (c1_max + 16), c2_max + 16)


def _deviation_points(ctx: Pipeline, stateless: bool, depth: int):
    """(round, position-before-eve-move, honest-move) for each honest-line round."""
    trace = _honest_trace(ctx, stateless, depth)
    played = len(trace.moves) // 2
    for r in range(1, min(depth, played) + 1):
        yield r, trace.positions[2 * r - 1], trace.moves[2 * r - 1]


def _check_rgs_punish_invariant(trace: PlayTrace, punished_round: int) -> None:
    for rnd, pos in trace.eve_turn_positions():
        if rnd > punished_round and pos.vector.x % 4 == 0:
            raise ScenarioFailure(
                "first counter is 0 mod 4 at Eve's turn in round %d after "
                "punishment at round %d" % (rnd, punished_round), trace)


def _check_rg_punish_invariant(ctx: Pipeline, trace: PlayTrace,
                               punished_round: int) -> None:
    en = ctx.eight_n
    for rnd, pos in trace.eve_turn_positions():
        if rnd > punished_round and pos.vector.y % ctx.modulus < en:
            raise ScenarioFailure(
                "second counter mod 4*8^n is in [0, 8^n) at Eve's turn in "
                "round %d after punishment at round %d" % (rnd, punished_round), trace)


def _run_deviation(ctx: Pipeline, stateless: bool, rnd: int, deviation,
                   report: LemmaReport, search=None, box=None) -> None:
    game = ctx.rg if stateless else ctx.rgs
    if stateless:
        referee = strat.adam_rg_referee(ctx)
        base = strat.eve_rg_strategy(ctx)
    else:
        referee = strat.adam_rgs_referee(ctx.flagged, ctx.rgs)
        base = strat.eve_rgs_strategy(ctx.flagged, ctx.rgs)
    eve = strat.DeviationEve(base, rnd, deviation)
    trace = engine.play(game, referee, eve, TRACE_ROUNDS)
    if trace.verdict.kind is VerdictKind.EVE_WINS:
        raise ScenarioFailure(
            "deviating Eve won at round %d against the referee" % trace.verdict.round,
            trace)
    if referee.punished_round != rnd:
        raise ScenarioFailure(
            "referee punished at %s, deviation was at round %d"
            % (referee.punished_round, rnd), trace)
    if stateless:
        _check_rg_punish_invariant(ctx, trace, rnd)
    else:
        _check_rgs_punish_invariant(trace, rnd)

    post = trace.positions[2 * rnd]
    if stateless:
        ledger = RgLedger(ctx)
        for i, mv in enumerate(trace.moves[: 2 * rnd]):
            if i % 2 == 0:
                ledger.apply_adam(mv)
            else:
                ledger.apply_eve(mv)
        state = sym_state_of_ledger(ledger, post.vector.x)
        assert state.y == post.vector.y
        k = search.search.win_rounds(state, MINIMAX_HORIZON)
        if k is not None:
            raise ScenarioFailure(
                "bounded minimax found an Eve win within %d rounds after the "
                "round-%d deviation" % (k, rnd), trace)
    else:
        result = minimax_winner(ctx.rgs, post, MINIMAX_HORIZON, box=box)
        if result.eve_wins:
            raise ScenarioFailure(
                "bounded minimax found an Eve win within %d rounds after the "
                "round-%d deviation" % (result.rounds, rnd), trace)
    report.cases += 1


def _scenario_honest(ctx: Pipeline, stateless: bool, report: LemmaReport) -> None:
    run = run_machine(ctx.machine, 64)
    cap = 24 if run.outcome.kind is OutcomeKind.ZERO_ZERO else 20
    trace = _honest_trace(ctx, stateless, cap)
    if run.outcome.kind is OutcomeKind.ZERO_ZERO:
        k = run.outcome.step
        if trace.verdict.kind is not VerdictKind.EVE_WINS:
            raise ScenarioFailure("honest play did not win for a both-zero machine", trace)
        aligned = machine_aligned_round(trace.verdict.round)
        want = k if not stateless else k + 1
        if aligned != want:
            raise ScenarioFailure(
                "honest win at aligned round %d, machine reaches both-zero at "
                "step %d" % (aligned, k), trace)
    else:
        if trace.verdict.kind is not VerdictKind.ONGOING:
            raise ScenarioFailure(
                "honest play ended (%s) though the machine never reaches "
                "both-zero" % trace.verdict, trace)
    _check_honest_correspondence(ctx, stateless, trace, run)
    report.cases += 1


def _check_honest_correspondence(ctx: Pipeline, stateless: bool,
                                 trace: PlayTrace, run) -> None:
    """Positions after each honest Eve move encode the machine configurations."""
    en = ctx.eight_n
    for i, pos in enumerate(trace.positions):
        step = i // 2 + 1
        if pos.turn is not Turn.ADAM or step >= len(run.trace):
            continue
        cfg = run.trace[step]
        if stateless:
            s = ctx.numbering.of(_flagged_of(cfg))
            want_y = 4 * en * cfg.c2 + 8 ** s - 1
            if pos.vector != Vec2(cfg.c1, want_y):
                raise ScenarioFailure(
                    "encoding mismatch at step %d: %s" % (step, pos.vector), trace)
        else:
            if pos.vector != Vec2(4 * cfg.c1, cfg.c2):
                raise ScenarioFailure(
                    "counter mismatch at step %d: %s" % (step, pos.vector), trace)
            if pos.vector.x % 4 != 0:
                raise ScenarioFailure("first counter not 0 mod 4 on honest line", trace)
            if pos.eve_state != _flagged_of(cfg):
                raise ScenarioFailure(
                    "state mismatch at step %d: %s" % (step, pos.eve_state), trace)


def _flagged_of(cfg):
    from .models import sim_state
    return sim_state(cfg.state, cfg.c1, cfg.c2)


def _scenario_cheat(ctx: Pipeline, stateless: bool, depth: int,
                    report: LemmaReport, premature: bool) -> None:
    """Enumerate single-move deviations of one class and verify the referee."""
    search = None
    box = None
    if stateless:
        search = SymbolicRgSearch(ctx, default_sym_box(ctx))
    else:
        box = _rgs_vector_box(ctx)
    game = ctx.rg if stateless else ctx.rgs
    for rnd, pos, honest in _deviation_points(ctx, stateless, depth):
        for move in engine.legal_moves(game, pos):
            if move == honest:
                continue
            if stateless:
                is_defence = ctx.move_table[move].check is not None
            else:
                is_defence = move.dst.is_top
            if is_defence != premature:
                continue
            after = engine.apply(game, pos, move)
            if after.vector.is_zero():
                report.note("round %d: a deviation wins outright (both-zero is due); skipped" % rnd)
                continue
            _run_deviation(ctx, stateless, rnd, move, report, search=search, box=box)


DRAIN_SLACK = 2  # documented drain bound: injection + c1 + c2 + slack


def _scenario_defence(ctx: Pipeline, stateless: bool, depth: int,
                      report: LemmaReport) -> None:
    """Inject Adam's check after honest play; Eve must drain to the origin."""
    check_vecs = ([ADAM_CHECK] if not stateless
                  else [ctx.check_vec(i) for i in ctx.numbering.t_indices])
    trace = _honest_trace(ctx, stateless, depth)
    played = len(trace.moves) // 2
    run = run_machine(ctx.machine, 64)
    for rnd in range(1, min(depth, played) + 1):
        cfg = run.trace[rnd] if rnd < len(run.trace) else run.trace[-1]
        bound = rnd + cfg.c1 + cfg.c2 + DRAIN_SLACK
        for check in check_vecs:
            for name, continuation in _adam_continuations(ctx, stateless, check):
                script = _injection_script(rnd, check, continuation)
                adam = strat.AdamScript(script)
                eve = (strat.eve_rg_strategy(ctx) if stateless
                       else strat.eve_rgs_strategy(ctx.flagged, ctx.rgs))
                game = ctx.rg if stateless else ctx.rgs
                t = engine.play(game, adam, eve, bound + 4)
                if t.verdict.kind is not VerdictKind.EVE_WINS:
                    raise ScenarioFailure(
                        "no Eve win after round-%d check with continuation %s"
                        % (rnd, name), t)
                if t.verdict.round > bound:
                    raise ScenarioFailure(
                        "Eve won at round %d, over the drain bound %d "
                        "(check at %d, continuation %s)"
                        % (t.verdict.round, bound, rnd, name), t)
                report.cases += 1


def _injection_script(rnd: int, check: Vec2, continuation) -> Callable[[int], Vec2]:
    def script(r: int) -> Vec2:
        if r < rnd:
            return ADAM_ZERO
        if r == rnd:
            return check
        return continuation(r - rnd)
    return script


def _adam_continuations(ctx: Pipeline, stateless: bool, check: Vec2):
    yield "zeros", lambda j: ADAM_ZERO
    yield "ones", lambda j: ADAM_CHECK
    yield "alternate", lambda j: ADAM_CHECK if j % 2 else ADAM_ZERO
    if stateless:
        yield "same-check", lambda j: check
        checks = [ctx.check_vec(i) for i in ctx.numbering.t_indices]
        yield "cycle-checks", lambda j: checks[j % len(checks)]
        yield "check-zero", lambda j: check if j % 2 else ADAM_ZERO


def verify_lemma(machine: MinskyMachine, scenario: str, depth: int) -> LemmaReport:
    """Check one proof scenario on the games compiled from the machine.

    Returns a report on success and raises ScenarioFailure with the
    counterexample trace otherwise.  The machine is used as given (it must
    start with an increment); normalize separately when starting from a
    halting-problem instance.
    """
    if scenario not in SCENARIOS:
        raise RobotGamesError("unknown scenario %r" % scenario)
    ctx = compile_pipeline(machine)
    report = LemmaReport(scenario)
    stateless = scenario in ("L5", "L6", "L7", "L8")
    kind = SCENARIOS.index(scenario) % 4
    if kind == 0:
        _scenario_honest(ctx, stateless, report)
    elif kind == 1:
        _scenario_cheat(ctx, stateless, depth, report, premature=False)
    elif kind == 2:
        _scenario_defence(ctx, stateless, depth, report)
    else:
        _scenario_cheat(ctx, stateless, depth, report, premature=True)
    return report

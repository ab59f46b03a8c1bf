"""The compiler passes: machine normalization, sign flags, and the two game lowerings.

The pipeline is

    MinskyMachine --normalize_zero_zero--> MinskyMachine (both-zero iff halt)
    MinskyMachine --add_flags-->           FlaggedMachine
    FlaggedMachine --rgs_from_2cm-->       RgsGame
    RgsGame       --rg_from_rgs-->         RobotGame (+ StateNumbering)
    RobotGame     --matrix_from_rg-->      MatrixGame

All passes are pure; equal inputs give structurally equal outputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .models import (
    Counter,
    Flag,
    FlaggedState,
    Instruction,
    InvalidMachine,
    MachineConfig,
    MatrixGame,
    Mat3,
    MinskyMachine,
    Op,
    RgsGame,
    RgsMove,
    RobotGame,
    RobotGamesError,
    Transition,
    Vec2,
    TOP_00,
    TOP_0P,
    TOP_P0,
    TOP_PP,
    TOPP_0P,
    TOPP_P0,
    TOPP_PP,
    flag_of,
    sim_state,
    step_machine,
    top_state,
    validate_machine,
)


class NotIncrementFirst(RobotGamesError):
    """The machine's first instruction must be an increment."""


class WrongShape(RobotGamesError):
    """The game is not a pipeline-produced instance of the expected shape."""


class IndexOutOfRange(RobotGamesError):
    pass


FLAG_ORDER = (
    (Flag.ZERO, Flag.ZERO),
    (Flag.PLUS, Flag.ZERO),
    (Flag.ZERO, Flag.PLUS),
    (Flag.PLUS, Flag.PLUS),
)

BOTH_FLAGS = (Flag.ZERO, Flag.PLUS)


# ---------------------------------------------------------------------------
# Zero-zero normalization
# ---------------------------------------------------------------------------

def normalize_zero_zero(m: MinskyMachine) -> MinskyMachine:
    """Rewrite a machine so both counters are zero (after step 0) iff it halts.

    The first counter carries a shift token (+1) for the whole run, so no
    ordinary configuration has both counters zero.  Zero tests on the first
    counter become a decrement/test/re-increment detour; a temporary bump on
    the second counter keeps the detour itself away from (0, 0).  Transitions
    into the old sink are redirected into a drain that empties the second
    counter, then the first (token last), and stops in a fresh sink.

    The output also contains no self-loop transitions, which the stateless
    lowering requires of every game it receives.
    """
    report = validate_machine(m)
    if not report.ok:
        raise InvalidMachine(report)

    used = set(m.states)

    def fresh(name: str) -> str:
        while name in used:
            name += "x"
        used.add(name)
        return name

    start = fresh("__start")
    dead_a = fresh("__dead_a")
    dead_b = fresh("__dead_b")
    dz_a = fresh("__drain2_a")
    dz_b = fresh("__drain2_b")
    d1_a = fresh("__drain1_a")
    d1_b = fresh("__drain1_b")
    final = fresh("__final")

    def r(target: str) -> str:
        # every edge into the old sink enters the drain instead
        return dz_a if target == m.sink else target

    inc1 = Instruction(Op.INC, Counter.C1)
    inc2 = Instruction(Op.INC, Counter.C2)
    dec1 = Instruction(Op.DEC, Counter.C1)
    dec2 = Instruction(Op.DEC, Counter.C2)
    zt1 = Instruction(Op.ZERO, Counter.C1)
    zt2 = Instruction(Op.ZERO, Counter.C2)

    states: list[str] = [start]
    trans: list[Transition] = [Transition(start, inc1, r(m.initial))]

    by_src: dict[str, list[Transition]] = {}
    for t in m.transitions:
        by_src.setdefault(t.src, []).append(t)

    for s in m.states:
        if s == m.sink:
            continue
        states.append(s)
        out = by_src.get(s, [])
        if len(out) == 1:
            t = out[0]
            if t.dst != s:
                trans.append(Transition(s, t.instr, r(t.dst)))
            else:
                # break the self-loop: two increments then one decrement
                lp1 = fresh(s + "__lp1")
                lp2 = fresh(s + "__lp2")
                states += [lp1, lp2]
                trans += [
                    Transition(s, t.instr, lp1),
                    Transition(lp1, t.instr, lp2),
                    Transition(lp2, Instruction(Op.DEC, t.instr.counter), s),
                    Transition(lp2, Instruction(Op.ZERO, t.instr.counter), dead_a),
                ]
            continue

        t_dec = next(t for t in out if t.instr.op is Op.DEC)
        t_zero = next(t for t in out if t.instr.op is Op.ZERO)
        if t_dec.instr.counter is Counter.C1:
            # shifted counter: bump c2, dip below the token, test, restore
            dip = fresh(s + "__dip")
            tst = fresh(s + "__tst")
            pos = fresh(s + "__pos")
            posr = fresh(s + "__posr")
            zer = fresh(s + "__zer")
            zerr = fresh(s + "__zerr")
            states += [dip, tst, pos, posr, zer, zerr]
            trans += [
                Transition(s, inc2, dip),
                Transition(dip, dec1, tst),
                Transition(dip, zt1, dead_a),
                Transition(tst, dec1, pos),
                Transition(tst, zt1, zer),
                Transition(pos, inc1, posr),
                Transition(posr, dec2, r(t_dec.dst)),
                Transition(posr, zt2, dead_a),
                Transition(zer, inc1, zerr),
                Transition(zerr, dec2, r(t_zero.dst)),
                Transition(zerr, zt2, dead_a),
            ]
        else:
            # second counter is unshifted; only self-loops need rewriting
            dec_dst, zero_dst = r(t_dec.dst), r(t_zero.dst)
            if t_dec.dst == s:
                w = fresh(s + "__dw")
                wr = fresh(s + "__dwr")
                states += [w, wr]
                trans += [
                    Transition(s, dec2, w),
                    Transition(w, inc2, wr),
                    Transition(wr, dec2, s),
                    Transition(wr, zt2, dead_a),
                ]
            else:
                trans.append(Transition(s, dec2, dec_dst))
            if t_zero.dst == s:
                w = fresh(s + "__zw")
                wr = fresh(s + "__zwr")
                states += [w, wr]
                trans += [
                    Transition(s, zt2, w),
                    Transition(w, inc2, wr),
                    Transition(wr, dec2, s),
                    Transition(wr, zt2, dead_a),
                ]
            else:
                trans.append(Transition(s, zt2, zero_dst))

    states += [dz_a, dz_b, d1_a, d1_b, dead_a, dead_b, final]
    trans += [
        Transition(dz_a, dec2, dz_b),
        Transition(dz_a, zt2, d1_a),
        Transition(dz_b, dec2, dz_a),
        Transition(dz_b, zt2, d1_a),
        Transition(d1_a, dec1, d1_b),
        Transition(d1_a, zt1, final),
        Transition(d1_b, dec1, d1_a),
        Transition(d1_b, zt1, final),
        Transition(dead_a, inc1, dead_b),
        Transition(dead_b, inc1, dead_a),
    ]

    out = MinskyMachine(tuple(states), start, final, tuple(trans))
    check = validate_machine(out)
    if not check.ok:
        raise InvalidMachine(check)
    return out


# ---------------------------------------------------------------------------
# Sign flags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlaggedTransition:
    src: FlaggedState
    instr: Instruction
    dst: FlaggedState


@dataclass(frozen=True)
class FlaggedMachine:
    """The nondeterministic flag-annotated machine produced by add_flags.

    Decrements are deliberately nondeterministic: the mover picks the target
    flag, and whether the pick matches the true counter sign is a concern of
    the players, not of this data structure.
    """
    base: MinskyMachine
    states: tuple[FlaggedState, ...]
    transitions: tuple[FlaggedTransition, ...]
    initial: FlaggedState

    def moves_from(self, state: FlaggedState) -> list[FlaggedTransition]:
        return [t for t in self.transitions if t.src == state]


def add_flags(m: MinskyMachine) -> FlaggedMachine:
    """Annotate every state with sign claims for both counters.

    Increments force the incremented flag to plus; zero tests require and
    preserve a zero flag; decrements require a plus flag on the source and
    leave the target flag free.
    """
    report = validate_machine(m)
    if not report.ok:
        raise InvalidMachine(report)

    states = tuple(
        FlaggedState(s, a, b) for s in m.states for (a, b) in FLAG_ORDER
    )
    trans: list[FlaggedTransition] = []
    for t in m.transitions:
        if t.instr.op is Op.INC and t.instr.counter is Counter.C1:
            for a, b in FLAG_ORDER:
                trans.append(FlaggedTransition(
                    FlaggedState(t.src, a, b), t.instr, FlaggedState(t.dst, Flag.PLUS, b)))
        elif t.instr.op is Op.INC:
            for a, b in FLAG_ORDER:
                trans.append(FlaggedTransition(
                    FlaggedState(t.src, a, b), t.instr, FlaggedState(t.dst, a, Flag.PLUS)))
        elif t.instr.op is Op.DEC and t.instr.counter is Counter.C1:
            for b in BOTH_FLAGS:
                for a in BOTH_FLAGS:
                    trans.append(FlaggedTransition(
                        FlaggedState(t.src, Flag.PLUS, b), t.instr, FlaggedState(t.dst, a, b)))
        elif t.instr.op is Op.DEC:
            for a in BOTH_FLAGS:
                for b in BOTH_FLAGS:
                    trans.append(FlaggedTransition(
                        FlaggedState(t.src, a, Flag.PLUS), t.instr, FlaggedState(t.dst, a, b)))
        elif t.instr.counter is Counter.C1:
            for b in BOTH_FLAGS:
                trans.append(FlaggedTransition(
                    FlaggedState(t.src, Flag.ZERO, b), t.instr, FlaggedState(t.dst, Flag.ZERO, b)))
        else:
            for a in BOTH_FLAGS:
                trans.append(FlaggedTransition(
                    FlaggedState(t.src, a, Flag.ZERO), t.instr, FlaggedState(t.dst, a, Flag.ZERO)))

    return FlaggedMachine(
        base=m,
        states=states,
        transitions=tuple(trans),
        initial=FlaggedState(m.initial, Flag.ZERO, Flag.ZERO),
    )


@dataclass(frozen=True)
class FlaggedConfig:
    state: FlaggedState
    c1: int
    c2: int


def run_flagged_sign_matching(mf: FlaggedMachine, max_steps: int) -> tuple[FlaggedConfig, ...]:
    """Run the flagged machine always choosing the target whose flags match the counters.

    The resulting trace projects to the base machine's run; flags equal
    counter signs at every step.  Exactly one candidate transition matches at
    each step of a valid machine.
    """
    cfg = FlaggedConfig(mf.initial, 0, 0)
    trace = [cfg]
    for _ in range(max_steps):
        if cfg.state.base == mf.base.sink:
            break
        base_cfg = MachineConfig(cfg.state.base, cfg.c1, cfg.c2)
        nxt = step_machine(mf.base, base_cfg)
        if nxt is None:
            break
        want = sim_state(nxt.state, nxt.c1, nxt.c2)
        candidates = [
            t for t in mf.moves_from(cfg.state) if t.dst == want
        ]
        if len(candidates) != 1:
            raise IllegalFlaggedRun(
                "expected one sign-matching transition at %s, found %d"
                % (cfg.state, len(candidates))
            )
        cfg = FlaggedConfig(want, nxt.c1, nxt.c2)
        trace.append(cfg)
    return tuple(trace)


class IllegalFlaggedRun(RobotGamesError):
    pass


# ---------------------------------------------------------------------------
# Machine to game with states
# ---------------------------------------------------------------------------

SIM_VEC = {
    (Op.INC, Counter.C1): Vec2(4, 0),
    (Op.DEC, Counter.C1): Vec2(-4, 0),
    (Op.ZERO, Counter.C1): Vec2(0, 0),
    (Op.INC, Counter.C2): Vec2(0, 1),
    (Op.DEC, Counter.C2): Vec2(0, -1),
    (Op.ZERO, Counter.C2): Vec2(0, 0),
}

ADAM_ZERO = Vec2(0, 0)
ADAM_CHECK = Vec2(1, 0)
ADAM_RGS_MOVES = frozenset({ADAM_ZERO, ADAM_CHECK})


def first_step(m: MinskyMachine) -> MachineConfig:
    """The configuration after one run step; the first instruction must increment."""
    out = m.outgoing(m.initial)
    if len(out) != 1 or out[0].instr.op is not Op.INC:
        raise NotIncrementFirst("first instruction of %s is not an increment" % m.initial)
    nxt = step_machine(m, MachineConfig(m.initial, 0, 0))
    assert nxt is not None
    return nxt


def rgs_from_2cm(mf: FlaggedMachine) -> RgsGame:
    """Lower a flagged machine to a game with states.

    Eve simulates transitions with the first counter scaled by four, can bail
    into the emptying family from any state at the cost of one first-counter
    unit, and drains inside the family while cancelling Adam's additions.
    Adam is stateless with exactly the wait move (0,0) and the positivity
    check (1,0).
    """
    moves: set[RgsMove] = set()
    for t in mf.transitions:
        moves.add(RgsMove(t.src, SIM_VEC[(t.instr.op, t.instr.counter)], t.dst))
    for s in mf.states:
        moves.add(RgsMove(s, Vec2(-1, 0), top_state(s.f1, s.f2)))
    for e in (0, 1):
        for t in (TOP_PP, TOP_P0, TOP_0P, TOP_00):
            moves.add(RgsMove(TOP_PP, Vec2(-4 - e, -1), t))
        for t in (TOP_P0, TOP_00):
            moves.add(RgsMove(TOP_P0, Vec2(-4 - e, 0), t))
        for t in (TOP_0P, TOP_00):
            moves.add(RgsMove(TOP_0P, Vec2(-e, -1), t))
        moves.add(RgsMove(TOP_00, Vec2(-e, 0), TOP_00))

    cfg1 = first_step(mf.base)
    y, z = cfg1.c1, cfg1.c2
    init_state = sim_state(cfg1.state, y, z)
    return RgsGame(
        eve_states=mf.states + (TOP_00, TOP_P0, TOP_0P, TOP_PP),
        adam_moves=ADAM_RGS_MOVES,
        eve_moves=frozenset(moves),
        initial_state=init_state,
        initial_vec=Vec2(4 * y, z),
    )


# ---------------------------------------------------------------------------
# State numbering and update vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StateNumbering:
    """Bijection from simulation and emptying states onto 0..n-1.

    The all-zero emptying state is 0, simulation states take 1..m in
    declaration order, and the six remaining emptying states occupy the top
    block in the fixed order primed-0+, 0+, primed-+0, +0, primed-++, ++.
    """
    n: int
    index: dict[FlaggedState, int]
    order: tuple[FlaggedState, ...]

    def of(self, state: FlaggedState) -> int:
        return self.index[state]

    @property
    def t_indices(self) -> range:
        """Indices of the six drainable emptying states."""
        return range(self.n - 6, self.n)


def build_numbering(sim_states: Iterable[FlaggedState]) -> StateNumbering:
    sims = tuple(sim_states)
    m = len(sims)
    n = m + 7
    order = (TOP_00,) + sims + (TOPP_0P, TOP_0P, TOPP_P0, TOP_P0, TOPP_PP, TOP_PP)
    index = {s: i for i, s in enumerate(order)}
    if len(index) != n:
        raise WrongShape("duplicate states in numbering input")
    return StateNumbering(n, index, order)


@dataclass(frozen=True)
class Add1:
    x: int


@dataclass(frozen=True)
class Add2:
    x: int


@dataclass(frozen=True)
class Move:
    j: int
    k: int


@dataclass(frozen=True)
class Check:
    i: int


UpdateVector = Union[Add1, Add2, Move, Check]


def update_vector(numbering: StateNumbering, form: UpdateVector) -> Vec2:
    """Evaluate a symbolic update to a concrete vector under a numbering."""
    n = numbering.n
    if isinstance(form, Add1):
        return Vec2(form.x, 0)
    if isinstance(form, Add2):
        return Vec2(0, 4 * form.x * 8 ** n)
    if isinstance(form, Move):
        if not (0 <= form.j < n and 0 <= form.k < n):
            raise IndexOutOfRange("move indices %d,%d outside 0..%d" % (form.j, form.k, n - 1))
        return Vec2(0, -(8 ** form.j) + 8 ** form.k)
    if isinstance(form, Check):
        if not (n - 6 <= form.i <= n - 1):
            raise IndexOutOfRange("check index %d outside %d..%d" % (form.i, n - 6, n - 1))
        return Vec2(0, -5 * 8 ** form.i - 8 ** n)
    raise TypeError("not an update vector: %r" % (form,))


def apply_sequence(numbering: StateNumbering, initial: Vec2, forms: Iterable[UpdateVector]) -> Vec2:
    v = initial
    for f in forms:
        v = v + update_vector(numbering, f)
    return v


# ---------------------------------------------------------------------------
# Game with states to stateless game
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoveForm:
    """Symbolic description of one of Eve's stateless moves.

    add1/add2 are counter deltas (machine units), move is a pair of state
    indices, alpha is a cancelled stateless-opponent vector, check is the
    index of a cancelled state check.  kind tags where the move came from.
    """
    kind: str
    add1: int = 0
    add2: int = 0
    move: Optional[tuple[int, int]] = None
    alpha: Optional[Vec2] = None
    check: Optional[int] = None


REGULAR = "regular"
FINISH = "finish"
DEFENCE = "defence"
GADGET = "gadget"
GADGET_CHECK = "gadget-check"
CANCEL = "cancel"

# emptying family without self-loops: staying on a level alternates between
# the primed and unprimed variant, dropping a level may land on either
PRIMED_GADGET = (
    (TOP_PP, Vec2(-4, -1), (TOPP_PP, TOP_P0, TOPP_P0, TOP_0P, TOPP_0P, TOP_00)),
    (TOPP_PP, Vec2(-4, -1), (TOP_PP, TOP_P0, TOPP_P0, TOP_0P, TOPP_0P, TOP_00)),
    (TOP_P0, Vec2(-4, 0), (TOPP_P0, TOP_00)),
    (TOPP_P0, Vec2(-4, 0), (TOP_P0, TOP_00)),
    (TOP_0P, Vec2(0, -1), (TOPP_0P, TOP_00)),
    (TOPP_0P, Vec2(0, -1), (TOP_0P, TOP_00)),
)

T_STATES = (TOPP_0P, TOP_0P, TOPP_P0, TOP_P0, TOPP_PP, TOP_PP)
A1 = (ADAM_ZERO, ADAM_CHECK)


def form_vector(numbering: StateNumbering, form: MoveForm) -> Vec2:
    v = Vec2(form.add1, 0) + update_vector(numbering, Add2(form.add2))
    if form.move is not None:
        v = v + update_vector(numbering, Move(*form.move))
    if form.alpha is not None:
        v = v - form.alpha
    if form.check is not None:
        v = v - update_vector(numbering, Check(form.check))
    return v


def _validate_rgs_shape(g: RgsGame) -> tuple[FlaggedState, ...]:
    if g.adam_moves != ADAM_RGS_MOVES:
        raise WrongShape("stateless player's move set must be {(0,0),(1,0)}")
    sims = tuple(s for s in g.eve_states if not s.is_top)
    tops = tuple(s for s in g.eve_states if s.is_top)
    if set(tops) != {TOP_00, TOP_P0, TOP_0P, TOP_PP}:
        raise WrongShape("expected exactly the four unprimed emptying states")
    if g.initial_state not in sims:
        raise WrongShape("initial state must be a simulation state")
    for mv in g.eve_moves:
        if mv.src.is_top:
            continue  # the emptying family is rebuilt, input rows are dropped
        if mv.dst.is_top:
            if mv.vec != Vec2(-1, 0) or mv.dst != top_state(mv.src.f1, mv.src.f2):
                raise WrongShape("bad connector %s" % (mv,))
        else:
            if mv.src == mv.dst:
                raise WrongShape("self-loop %s; the stateless lowering forbids them" % (mv,))
    return sims


def generate_rg_moves(g: RgsGame, numbering: StateNumbering) -> list[tuple[Vec2, MoveForm]]:
    """All of Eve's stateless moves with their symbolic descriptions, pre-dedup."""
    idx = numbering.of
    t_idx = [numbering.of(s) for s in T_STATES]
    out: list[tuple[Vec2, MoveForm]] = []

    def emit(form: MoveForm) -> None:
        out.append((form_vector(numbering, form), form))

    # images of simulation moves and connectors
    for mv in sorted(g.eve_moves, key=lambda r: (r.src.render(), r.dst.render(), r.vec.x, r.vec.y)):
        if mv.src.is_top:
            continue
        emit(MoveForm(REGULAR, add1=mv.vec.x, add2=mv.vec.y,
                      move=(idx(mv.src), idx(mv.dst))))

    sims = [s for s in g.eve_states if not s.is_top]
    for s in sims:
        if s.f1 is Flag.ZERO and s.f2 is Flag.ZERO:
            for alpha in A1:
                emit(MoveForm(FINISH, move=(idx(s), 0), alpha=alpha))
            for i in t_idx:
                emit(MoveForm(DEFENCE, move=(idx(s), 0), check=i))
        else:
            for k in (top_state(s.f1, s.f2), top_state(s.f1, s.f2, primed=True)):
                for i in t_idx:
                    if i == idx(k):
                        continue
                    emit(MoveForm(DEFENCE, move=(idx(s), idx(k)), check=i))

    # emptying rows cancelling a stateless-opponent vector
    for src, delta, targets in PRIMED_GADGET:
        for k in targets:
            for alpha in A1:
                emit(MoveForm(GADGET, add1=delta.x, add2=delta.y,
                              move=(idx(src), idx(k)), alpha=alpha))

    # emptying rows cancelling a state check
    for j in (TOP_PP, TOPP_PP):
        for k in T_STATES:
            if k == j:
                continue
            for i in t_idx:
                if i == idx(k):
                    continue
                emit(MoveForm(GADGET_CHECK, add1=-4, add2=-1,
                              move=(idx(j), idx(k)), check=i))
    for j, d1, d2 in ((TOP_PP, -4, -1), (TOPP_PP, -4, -1),
                      (TOP_P0, -4, 0), (TOPP_P0, -4, 0),
                      (TOP_0P, 0, -1), (TOPP_0P, 0, -1)):
        for i in t_idx:
            emit(MoveForm(GADGET_CHECK, add1=d1, add2=d2, move=(idx(j), 0), check=i))

    # stay-in-place cancels with optional draining
    for e1 in (0, 1):
        for e2 in (0, 1):
            for i in t_idx:
                emit(MoveForm(CANCEL, add1=-4 * e1, add2=-e2, check=i))

    return out


def rg_move_table(g: RgsGame) -> tuple[StateNumbering, dict[Vec2, MoveForm]]:
    """Deterministic vector-to-symbolic-form table for a pipeline game.

    Distinct rows may share a vector when they describe the same action (the
    bridge move out of an all-zero state is also the finishing move netted
    against the positivity check); that is fine as long as the ledger effect
    (second-counter units, state pair, cancelled check) agrees.  A vector
    with two different ledger effects would make history tracking ambiguous;
    none arises from the construction and we fail loudly if one does.
    """
    sims = _validate_rgs_shape(g)
    numbering = build_numbering(sims)
    table: dict[Vec2, MoveForm] = {}
    for vec, form in generate_rg_moves(g, numbering):
        old = table.get(vec)
        if old is None:
            table[vec] = form
        elif (old.add2, old.move, old.check) != (form.add2, form.move, form.check):
            raise WrongShape("ambiguous move vector %s: %r vs %r" % (vec, old, form))
    return numbering, table


def rg_from_rgs(g: RgsGame) -> tuple[RobotGame, StateNumbering]:
    """Lower a pipeline game with states to a stateless game.

    States ride in the second coordinate as coefficients of powers of eight;
    the second counter itself is scaled by 4*8^n.  The stateless opponent
    keeps his two vectors and gains the six state checks, eight moves total.
    """
    numbering, table = rg_move_table(g)
    checks = frozenset(
        update_vector(numbering, Check(i)) for i in numbering.t_indices
    )
    s0 = numbering.of(g.initial_state)
    initial = apply_sequence(
        numbering,
        Vec2(g.initial_vec.x, 0),
        (Add2(g.initial_vec.y), Move(0, s0)),
    )
    rg = RobotGame(
        adam_moves=frozenset(A1) | checks,
        eve_moves=frozenset(table.keys()),
        initial=initial,
    )
    return rg, numbering


# ---------------------------------------------------------------------------
# Stateless game to matrix game, and move counting
# ---------------------------------------------------------------------------

def mat_of_move(v: Vec2) -> Mat3:
    return ((1, 0, 0), (v.x, 1, v.y), (0, 0, 1))


def matrix_from_rg(g: RobotGame) -> MatrixGame:
    """Embed a stateless game into 3x3 integer matrices acting on row vectors."""
    return MatrixGame(
        adam_mats=frozenset(mat_of_move(v) for v in g.adam_moves),
        eve_mats=frozenset(mat_of_move(v) for v in g.eve_moves),
        initial=(g.initial.x, 1, g.initial.y),
        target=(0, 1, 0),
    )


@dataclass(frozen=True)
class MoveCountReport:
    adam_count: int
    eve_count: int
    source_states: int
    bound: int

    @property
    def adam_ok(self) -> bool:
        return self.adam_count == 8

    @property
    def eve_ok(self) -> bool:
        return self.eve_count <= self.bound


def count_moves(rg: RobotGame, source_states: int) -> MoveCountReport:
    """Exact deduplicated move counts checked against 58*m + 227."""
    return MoveCountReport(
        adam_count=len(rg.adam_moves),
        eve_count=len(rg.eve_moves),
        source_states=source_states,
        bound=58 * source_states + 227,
    )


# ---------------------------------------------------------------------------
# Whole pipeline
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pipeline:
    """Every stage of the lowering for one increment-first machine."""
    machine: MinskyMachine
    flagged: FlaggedMachine
    rgs: RgsGame
    rg: RobotGame
    numbering: StateNumbering
    move_table: dict[Vec2, MoveForm]

    @property
    def n(self) -> int:
        return self.numbering.n

    @property
    def eight_n(self) -> int:
        return 8 ** self.numbering.n

    @property
    def modulus(self) -> int:
        return 4 * 8 ** self.numbering.n

    def check_vec(self, i: int) -> Vec2:
        return update_vector(self.numbering, Check(i))


def compile_pipeline(machine: MinskyMachine) -> Pipeline:
    """Lower an increment-first machine through every game stage."""
    flagged = add_flags(machine)
    rgs = rgs_from_2cm(flagged)
    numbering, table = rg_move_table(rgs)
    rg, numbering2 = rg_from_rgs(rgs)
    assert numbering2.index == numbering.index
    return Pipeline(machine, flagged, rgs, rg, numbering, table)


class RgLedger:
    """Symbolic decomposition of a stateless-game second coordinate.

    Tracks second-counter units (multiples of 4*8^n), the check budget in
    8^n quarters, and the per-state coefficients of powers of eight, fed by
    the observed move history.  The raw coordinate is always
    4*8^n*units + 8^n*quarters + sum(coeff[p] * 8^p).
    """

    def __init__(self, ctx: Pipeline):
        self.ctx = ctx
        self.units = ctx.rgs.initial_vec.y
        self.quarters = 0
        s0 = ctx.numbering.of(ctx.rgs.initial_state)
        self.coeff: dict[int, int] = {0: -1, s0: 1}
        self._checks = {ctx.check_vec(i): i for i in ctx.numbering.t_indices}

    def apply_eve(self, vec: Vec2) -> MoveForm:
        form = self.ctx.move_table[vec]
        self.units += form.add2
        if form.move is not None:
            j, k = form.move
            self.coeff[j] = self.coeff.get(j, 0) - 1
            self.coeff[k] = self.coeff.get(k, 0) + 1
        if form.check is not None:
            self.coeff[form.check] = self.coeff.get(form.check, 0) + 5
            self.quarters += 1
        return form

    def apply_adam(self, vec: Vec2) -> Optional[int]:
        i = self._checks.get(vec)
        if i is not None:
            self.coeff[i] = self.coeff.get(i, 0) - 5
            self.quarters -= 1
        return i

    def check_index(self, vec: Vec2) -> Optional[int]:
        return self._checks.get(vec)

    def y_value(self) -> int:
        en = self.ctx.eight_n
        return 4 * en * self.units + en * self.quarters + sum(
            c * 8 ** p for p, c in self.coeff.items()
        )

    def nonzero_t(self) -> list[int]:
        """Drainable-state indices with nonzero coefficient, highest first."""
        return [i for i in reversed(self.ctx.numbering.t_indices)
                if self.coeff.get(i, 0) != 0]

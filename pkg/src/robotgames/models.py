"""Core data model: two-counter machines, their step semantics, and the game arenas.

Machine states are opaque strings; ordering is declaration order, which later
stages rely on for deterministic state numbering.  Counters and game vectors
are plain Python ints, so all arithmetic is exact at any size.

Everything here is an immutable value; operations are pure functions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class RobotGamesError(Exception):
    """Base class for every domain error raised by this package."""


class IllegalConfig(RobotGamesError):
    """No transition is enabled; signals a corrupted machine or configuration."""


class ArithmeticOverflow(RobotGamesError):
    """An integer exceeded the optional ROBOTGAMES_MAX_INT_BITS cap."""


INT_CAP_ENV = "ROBOTGAMES_MAX_INT_BITS"


def check_int_cap(*values: int) -> None:
    """Raise ArithmeticOverflow if any value is wider than the configured cap.

    The cap is read from the ROBOTGAMES_MAX_INT_BITS environment variable and
    is unlimited when the variable is unset or empty.  It exists to catch
    runaway encodings in tests, not to police normal use.
    """
    cap = os.environ.get(INT_CAP_ENV)
    if not cap:
        return
    bits = int(cap)
    for v in values:
        if v.bit_length() > bits:
            raise ArithmeticOverflow(
                "integer needs %d bits, cap is %d" % (v.bit_length(), bits)
            )


# ---------------------------------------------------------------------------
# Machines
# ---------------------------------------------------------------------------

class Counter(Enum):
    C1 = 1
    C2 = 2


class Op(Enum):
    INC = "++"
    DEC = "--"
    ZERO = "==0"


@dataclass(frozen=True)
class Instruction:
    op: Op
    counter: Counter

    @property
    def label(self) -> str:
        return "c%d%s" % (self.counter.value, self.op.value)


LABELS = {
    "c1++": Instruction(Op.INC, Counter.C1),
    "c1--": Instruction(Op.DEC, Counter.C1),
    "c1==0": Instruction(Op.ZERO, Counter.C1),
    "c2++": Instruction(Op.INC, Counter.C2),
    "c2--": Instruction(Op.DEC, Counter.C2),
    "c2==0": Instruction(Op.ZERO, Counter.C2),
}


@dataclass(frozen=True)
class Transition:
    src: str
    instr: Instruction
    dst: str


@dataclass(frozen=True)
class MinskyMachine:
    """A deterministic two-counter machine.

    Determinism is a shape constraint checked by validate_machine: every
    non-sink state carries either a single increment or a decrement/zero-test
    pair on one counter, and the sink has no outgoing transitions.
    """
    states: tuple[str, ...]
    initial: str
    sink: str
    transitions: tuple[Transition, ...]

    def outgoing(self, state: str) -> tuple[Transition, ...]:
        return tuple(t for t in self.transitions if t.src == state)


@dataclass(frozen=True)
class MachineConfig:
    state: str
    c1: int
    c2: int

    def __post_init__(self):
        if self.c1 < 0 or self.c2 < 0:
            raise IllegalConfig("negative counter in %r" % (self,))

    @property
    def counters(self) -> tuple[int, int]:
        return (self.c1, self.c2)


@dataclass(frozen=True)
class Violation:
    state: str
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join("%s: %s" % (v.state, v.reason) for v in self.violations)


class InvalidMachine(RobotGamesError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def validate_machine(m: MinskyMachine) -> ValidationReport:
    """Check the determinism shape of a machine; violations are data, not errors."""
    bad: list[Violation] = []
    known = set(m.states)
    if m.initial not in known:
        bad.append(Violation(m.initial, "initial state not declared"))
    if m.sink not in known:
        bad.append(Violation(m.sink, "sink state not declared"))
    for t in m.transitions:
        if t.src not in known:
            bad.append(Violation(t.src, "transition source not declared"))
        if t.dst not in known:
            bad.append(Violation(t.dst, "transition target not declared"))

    by_src: dict[str, list[Transition]] = {}
    for t in m.transitions:
        by_src.setdefault(t.src, []).append(t)

    for t in by_src.get(m.sink, []):
        bad.append(Violation(m.sink, "sink has outgoing transition %s" % t.instr.label))

    for s in m.states:
        if s == m.sink:
            continue
        out = by_src.get(s, [])
        if len(out) == 1 and out[0].instr.op is Op.INC:
            continue
        if len(out) == 2:
            ops = sorted((t.instr.op for t in out), key=lambda o: o.value)
            counters = {t.instr.counter for t in out}
            if ops == [Op.DEC, Op.ZERO] and len(counters) == 1:
                continue
        bad.append(Violation(
            s, "needs one increment or a decrement/zero-test pair on one counter"
        ))
    return ValidationReport(not bad, tuple(bad))


def step_machine(m: MinskyMachine, cfg: MachineConfig) -> Optional[MachineConfig]:
    """Apply the unique enabled transition; None means the configuration is at the sink.

    Assumes a valid machine.  Raises IllegalConfig when no transition is
    enabled, which cannot happen for valid machines.
    """
    if cfg.state == m.sink:
        return None
    enabled = _enabled_transition(m, cfg)
    c1, c2 = cfg.c1, cfg.c2
    delta = 1 if enabled.instr.op is Op.INC else (-1 if enabled.instr.op is Op.DEC else 0)
    if enabled.instr.counter is Counter.C1:
        c1 += delta
    else:
        c2 += delta
    return MachineConfig(enabled.dst, c1, c2)


def _enabled_transition(m: MinskyMachine, cfg: MachineConfig) -> Transition:
    out = m.outgoing(cfg.state)
    for t in out:
        value = cfg.c1 if t.instr.counter is Counter.C1 else cfg.c2
        if t.instr.op is Op.INC:
            return t
        if t.instr.op is Op.DEC and value > 0:
            return t
        if t.instr.op is Op.ZERO and value == 0:
            return t
    raise IllegalConfig("no enabled transition at %r" % (cfg,))


class OutcomeKind(Enum):
    ZERO_ZERO = "zero-zero"
    SINK = "sink"
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class RunOutcome:
    kind: OutcomeKind
    step: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is OutcomeKind.EXHAUSTED:
            return "exhausted"
        return "%s at step %d" % (self.kind.value, self.step)


@dataclass(frozen=True)
class RunResult:
    outcome: RunOutcome
    trace: tuple[MachineConfig, ...]


def run_machine(m: MinskyMachine, max_steps: int) -> RunResult:
    """Run from (initial, (0,0)) and report the first both-zero configuration.

    Step 0 is excluded from zero-zero detection: the run always starts with
    both counters zero, so counting it would make every machine a trivial hit.
    """
    report = validate_machine(m)
    if not report.ok:
        raise InvalidMachine(report)
    cfg = MachineConfig(m.initial, 0, 0)
    trace = [cfg]
    for k in range(1, max_steps + 1):
        nxt = step_machine(m, cfg)
        if nxt is None:
            return RunResult(RunOutcome(OutcomeKind.SINK, k - 1), tuple(trace))
        cfg = nxt
        trace.append(cfg)
        if cfg.c1 == 0 and cfg.c2 == 0:
            return RunResult(RunOutcome(OutcomeKind.ZERO_ZERO, k), tuple(trace))
    if cfg.state == m.sink:
        return RunResult(RunOutcome(OutcomeKind.SINK, max_steps), tuple(trace))
    return RunResult(RunOutcome(OutcomeKind.EXHAUSTED), tuple(trace))


# ---------------------------------------------------------------------------
# Flags and flagged states
# ---------------------------------------------------------------------------

class Flag(Enum):
    ZERO = "0"
    PLUS = "+"


def flag_of(value: int) -> Flag:
    return Flag.PLUS if value > 0 else Flag.ZERO


@dataclass(frozen=True)
class FlaggedState:
    """A control state annotated with per-counter sign claims.

    base is None for the emptying family; primed is only meaningful there.
    The primed variant of the all-zero emptying state does not exist.
    """
    base: Optional[str]
    f1: Flag
    f2: Flag
    primed: bool = False

    def __post_init__(self):
        if self.base is not None and self.primed:
            raise ValueError("only emptying states have primed variants")
        if self.base is None and self.primed and self.f1 is Flag.ZERO and self.f2 is Flag.ZERO:
            raise ValueError("the primed all-zero emptying state does not exist")

    @property
    def is_top(self) -> bool:
        return self.base is None

    @property
    def flags(self) -> tuple[Flag, Flag]:
        return (self.f1, self.f2)

    def render(self) -> str:
        tag = "[%s%s]" % (self.f1.value, self.f2.value)
        if self.base is None:
            return ("^'" if self.primed else "^") + tag
        return self.base + tag

    def __str__(self) -> str:
        return self.render()


def sim_state(base: str, c1_sign, c2_sign) -> FlaggedState:
    f1 = c1_sign if isinstance(c1_sign, Flag) else flag_of(c1_sign)
    f2 = c2_sign if isinstance(c2_sign, Flag) else flag_of(c2_sign)
    return FlaggedState(base, f1, f2)


def top_state(f1: Flag, f2: Flag, primed: bool = False) -> FlaggedState:
    return FlaggedState(None, f1, f2, primed)


TOP_00 = top_state(Flag.ZERO, Flag.ZERO)
TOP_P0 = top_state(Flag.PLUS, Flag.ZERO)
TOP_0P = top_state(Flag.ZERO, Flag.PLUS)
TOP_PP = top_state(Flag.PLUS, Flag.PLUS)
TOPP_P0 = top_state(Flag.PLUS, Flag.ZERO, primed=True)
TOPP_0P = top_state(Flag.ZERO, Flag.PLUS, primed=True)
TOPP_PP = top_state(Flag.PLUS, Flag.PLUS, primed=True)


def parse_state_name(name: str) -> FlaggedState:
    """Inverse of FlaggedState.render; raises ValueError on bad names."""
    if len(name) < 4 or name[-1] != "]" or name[-4] != "[":
        raise ValueError("bad state name %r" % name)
    a, b = name[-3], name[-2]
    flags = {"0": Flag.ZERO, "+": Flag.PLUS}
    if a not in flags or b not in flags:
        raise ValueError("bad flags in state name %r" % name)
    head = name[:-4]
    if head == "^":
        return top_state(flags[a], flags[b])
    if head == "^'":
        return top_state(flags[a], flags[b], primed=True)
    if not head or "^" in head:
        raise ValueError("bad state name %r" % name)
    return FlaggedState(head, flags[a], flags[b])


# ---------------------------------------------------------------------------
# Vectors and games
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Vec2:
    x: int
    y: int

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x, -self.y)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def __str__(self) -> str:
        return "(%d, %d)" % (self.x, self.y)


VEC_ZERO = Vec2(0, 0)


@dataclass(frozen=True)
class RgsMove:
    src: FlaggedState
    vec: Vec2
    dst: FlaggedState


@dataclass(frozen=True)
class RgsGame:
    """A two-dimensional game where only the vector-adding player Eve has states.

    Adam is stateless: his moves are plain vectors applied from his single
    implicit location, and by construction they never touch the second
    coordinate.
    """
    eve_states: tuple[FlaggedState, ...]
    adam_moves: frozenset[Vec2]
    eve_moves: frozenset[RgsMove]
    initial_state: FlaggedState
    initial_vec: Vec2

    def __post_init__(self):
        for v in self.adam_moves:
            if v.y != 0:
                raise ValueError("stateless player must not modify the second coordinate")

    def moves_from(self, state: FlaggedState) -> list[RgsMove]:
        return [mv for mv in self.eve_moves if mv.src == state]


@dataclass(frozen=True)
class RobotGame:
    """A stateless two-player vector addition game on the integer grid."""
    adam_moves: frozenset[Vec2]
    eve_moves: frozenset[Vec2]
    initial: Vec2


Mat3 = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]
Vec3 = tuple[int, int, int]


@dataclass(frozen=True)
class MatrixGame:
    adam_mats: frozenset[Mat3]
    eve_mats: frozenset[Mat3]
    initial: Vec3
    target: Vec3


def mat3_apply(v: Vec3, m: Mat3) -> Vec3:
    """Row vector times matrix."""
    return tuple(
        v[0] * m[0][j] + v[1] * m[1][j] + v[2] * m[2][j] for j in range(3)
    )  # type: ignore[return-value]

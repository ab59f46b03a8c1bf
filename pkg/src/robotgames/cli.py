"""Machine text format, stable game serialization, and the command-line surface.

Machine files are line-oriented: `states: <id>+`, `init: <id>`, `sink: <id>`,
and one `trans: <src> <label> <dst>` per transition with labels c1++, c1--,
c1==0, c2++, c2--, c2==0.  `#` starts a comment.  Game files are JSON with
every integer as a decimal string and move sets as sorted arrays, so emitting
the same game twice gives identical bytes.

Exit codes: 0 success, 1 domain failure (validation, bound or scenario
failure), 2 usage or parse failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Optional

from . import engine, solver
from . import strategies as strat
from .models import (
    FlaggedState,
    InvalidMachine,
    LABELS,
    MatrixGame,
    MinskyMachine,
    RgsGame,
    RgsMove,
    RobotGame,
    RobotGamesError,
    Transition,
    ValidationReport,
    Vec2,
    parse_state_name,
    run_machine,
    validate_machine,
)
from .reductions import (
    FlaggedMachine,
    add_flags,
    compile_pipeline,
    count_moves,
    matrix_from_rg,
    normalize_zero_zero,
    rg_from_rgs,
    rgs_from_2cm,
)


class ParseError(RobotGamesError):
    def __init__(self, line: int, reason: str):
        super().__init__("line %d: %s" % (line, reason))
        self.line = line
        self.reason = reason


class ValidationError(RobotGamesError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


_ID = re.compile(r"^[A-Za-z0-9_.\-]+$")
_DECIMAL = re.compile(r"^-?(0|[1-9][0-9]*)$")


# ---------------------------------------------------------------------------
# Machine text format
# ---------------------------------------------------------------------------

def parse_machine(text: str) -> MinskyMachine:
    states: Optional[tuple[str, ...]] = None
    init: Optional[str] = None
    sink: Optional[str] = None
    trans: list[Transition] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(lineno, "expected '<directive>: ...'")
        directive, rest = line.split(":", 1)
        directive = directive.strip()
        tokens = rest.split()
        if directive == "states":
            if states is not None:
                raise ParseError(lineno, "duplicate states directive")
            if not tokens:
                raise ParseError(lineno, "states directive needs at least one id")
            for t in tokens:
                if not _ID.match(t):
                    raise ParseError(lineno, "bad state id %r" % t)
            if len(set(tokens)) != len(tokens):
                raise ParseError(lineno, "duplicate state id")
            states = tuple(tokens)
        elif directive in ("init", "sink"):
            if len(tokens) != 1:
                raise ParseError(lineno, "%s directive needs exactly one id" % directive)
            if directive == "init":
                if init is not None:
                    raise ParseError(lineno, "duplicate init directive")
                init = tokens[0]
            else:
                if sink is not None:
                    raise ParseError(lineno, "duplicate sink directive")
                sink = tokens[0]
        elif directive == "trans":
            if len(tokens) != 3:
                raise ParseError(lineno, "trans directive needs '<src> <label> <dst>'")
            src, label, dst = tokens
            if label not in LABELS:
                raise ParseError(lineno, "unknown label %r" % label)
            if not _ID.match(src) or not _ID.match(dst):
                raise ParseError(lineno, "bad state id in transition")
            t = Transition(src, LABELS[label], dst)
            if t not in trans:
                trans.append(t)
        else:
            raise ParseError(lineno, "unknown directive %r" % directive)
    if states is None:
        raise ParseError(0, "missing states directive")
    if init is None:
        raise ParseError(0, "missing init directive")
    if sink is None:
        raise ParseError(0, "missing sink directive")
    machine = MinskyMachine(states, init, sink, tuple(trans))
    report = validate_machine(machine)
    if not report.ok:
        raise ValidationError(report)
    return machine


def machine_to_text(m: MinskyMachine) -> str:
    lines = [
        "states: " + " ".join(m.states),
        "init: " + m.initial,
        "sink: " + m.sink,
    ]
    for t in m.transitions:
        lines.append("trans: %s %s %s" % (t.src, t.instr.label, t.dst))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Game serialization
# ---------------------------------------------------------------------------

def _int_str(v: int) -> str:
    return str(v)


def _read_int(s, where: str) -> int:
    if not isinstance(s, str) or not _DECIMAL.match(s):
        raise ParseError(0, "%s: not a decimal string: %r" % (where, s))
    return int(s)


def _vec_obj(v: Vec2) -> dict:
    return {"x": _int_str(v.x), "y": _int_str(v.y)}


def _vec_key(v: Vec2) -> tuple[str, str]:
    return (str(v.x), str(v.y))


def _read_vec(obj, where: str) -> Vec2:
    if not isinstance(obj, dict) or set(obj) != {"x", "y"}:
        raise ParseError(0, "%s: expected {x, y}" % where)
    return Vec2(_read_int(obj["x"], where), _read_int(obj["y"], where))


def emit_game(game) -> str:
    """Stable JSON text: decimal-string integers, lexicographically sorted moves."""
    if isinstance(game, RobotGame):
        doc = {
            "kind": "rg",
            "adam": [_vec_obj(v) for v in sorted(game.adam_moves, key=_vec_key)],
            "eve": [_vec_obj(v) for v in sorted(game.eve_moves, key=_vec_key)],
            "initial": _vec_obj(game.initial),
        }
    elif isinstance(game, RgsGame):
        doc = {
            "kind": "rgs",
            "states": [s.render() for s in game.eve_states],
            "adam": [_vec_obj(v) for v in sorted(game.adam_moves, key=_vec_key)],
            "eve": [
                {"src": mv.src.render(), "x": _int_str(mv.vec.x),
                 "y": _int_str(mv.vec.y), "dst": mv.dst.render()}
                for mv in sorted(
                    game.eve_moves,
                    key=lambda mv: (mv.src.render(), _vec_key(mv.vec), mv.dst.render()))
            ],
            "initial": {"state": game.initial_state.render(),
                        "x": _int_str(game.initial_vec.x),
                        "y": _int_str(game.initial_vec.y)},
        }
    elif isinstance(game, MatrixGame):
        def mat_row(m):
            return [_int_str(v) for row in m for v in row]
        doc = {
            "kind": "matrix",
            "adam": sorted((mat_row(m) for m in game.adam_mats)),
            "eve": sorted((mat_row(m) for m in game.eve_mats)),
            "initial": [_int_str(v) for v in game.initial],
            "target": [_int_str(v) for v in game.target],
        }
    elif isinstance(game, FlaggedMachine):
        doc = {
            "kind": "flagged",
            "base": {
                "states": list(game.base.states),
                "init": game.base.initial,
                "sink": game.base.sink,
                "trans": [[t.src, t.instr.label, t.dst] for t in game.base.transitions],
            },
            "states": [s.render() for s in game.states],
            "initial": game.initial.render(),
            "transitions": [
                [t.src.render(), t.instr.label, t.dst.render()]
                for t in game.transitions
            ],
        }
    else:
        raise TypeError("cannot serialize %r" % (game,))
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def load_game(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, "bad JSON: %s" % exc.msg) from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError(0, "game document needs a kind field")
    kind = doc["kind"]
    try:
        if kind == "rg":
            return RobotGame(
                adam_moves=frozenset(_read_vec(v, "adam") for v in doc["adam"]),
                eve_moves=frozenset(_read_vec(v, "eve") for v in doc["eve"]),
                initial=_read_vec(doc["initial"], "initial"),
            )
        if kind == "rgs":
            states = tuple(_read_state(s) for s in doc["states"])
            moves = frozenset(
                RgsMove(_read_state(mv["src"]),
                        Vec2(_read_int(mv["x"], "eve"), _read_int(mv["y"], "eve")),
                        _read_state(mv["dst"]))
                for mv in doc["eve"]
            )
            init = doc["initial"]
            return RgsGame(
                eve_states=states,
                adam_moves=frozenset(_read_vec(v, "adam") for v in doc["adam"]),
                eve_moves=moves,
                initial_state=_read_state(init["state"]),
                initial_vec=Vec2(_read_int(init["x"], "initial"),
                                 _read_int(init["y"], "initial")),
            )
        if kind == "matrix":
            def mat_of(row) -> tuple:
                if len(row) != 9:
                    raise ParseError(0, "matrix rows need nine entries")
                v = [_read_int(s, "matrix") for s in row]
                return ((v[0], v[1], v[2]), (v[3], v[4], v[5]), (v[6], v[7], v[8]))
            return MatrixGame(
                adam_mats=frozenset(mat_of(m) for m in doc["adam"]),
                eve_mats=frozenset(mat_of(m) for m in doc["eve"]),
                initial=tuple(_read_int(s, "initial") for s in doc["initial"]),
                target=tuple(_read_int(s, "target") for s in doc["target"]),
            )
        if kind == "flagged":
            base_doc = doc["base"]
            base = MinskyMachine(
                tuple(base_doc["states"]), base_doc["init"], base_doc["sink"],
                tuple(Transition(s, LABELS[l], d) for s, l, d in base_doc["trans"]),
            )
            from .reductions import FlaggedTransition
            return FlaggedMachine(
                base=base,
                states=tuple(_read_state(s) for s in doc["states"]),
                transitions=tuple(
                    FlaggedTransition(_read_state(s), LABELS[l], _read_state(d))
                    for s, l, d in doc["transitions"]
                ),
                initial=_read_state(doc["initial"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(0, "malformed %s document: %s" % (kind, exc)) from exc
    raise ParseError(0, "unknown game kind %r" % kind)


def _read_state(name) -> FlaggedState:
    if not isinstance(name, str):
        raise ParseError(0, "state name must be a string")
    try:
        return parse_state_name(name)
    except ValueError as exc:
        raise ParseError(0, str(exc)) from exc


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _load_machine(path: str) -> MinskyMachine:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_machine(handle.read())


def _write_out(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def cmd_validate(args) -> int:
    with open(args.machine, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        parse_machine(text)
    except ValidationError as exc:
        for v in exc.report.violations:
            print("%s: %s" % (v.state, v.reason))
        return 1
    print("ok")
    return 0


def cmd_run(args) -> int:
    m = _load_machine(args.machine)
    result = run_machine(m, args.max_steps)
    print(result.outcome)
    for i, cfg in enumerate(result.trace):
        print("%4d  %s (%d, %d)" % (i, cfg.state, cfg.c1, cfg.c2))
    return 0


def cmd_reduce(args) -> int:
    m = _load_machine(args.machine)
    if args.to == "normalized":
        _write_out(machine_to_text(normalize_zero_zero(m)), args.output)
        return 0
    if args.to == "flags":
        _write_out(emit_game(add_flags(m)), args.output)
        return 0
    rgs = rgs_from_2cm(add_flags(m))
    if args.to == "rgs":
        _write_out(emit_game(rgs), args.output)
        return 0
    rg, _ = rg_from_rgs(rgs)
    if args.to == "rg":
        _write_out(emit_game(rg), args.output)
        return 0
    _write_out(emit_game(matrix_from_rg(rg)), args.output)
    return 0


def cmd_solve(args) -> int:
    with open(args.game, "r", encoding="utf-8") as handle:
        game = load_game(handle.read())
    if isinstance(game, MatrixGame):
        raise RobotGamesError("solve works on rg and rgs games; play matrices "
                              "through the vector embedding")
    pos = engine.initial_position(game)
    result = solver.minimax_winner(game, pos, args.horizon, box=args.box)
    print("%s %d" % (result.verdict, result.rounds))
    return 0


def cmd_count(args) -> int:
    m = _load_machine(args.machine)
    ctx = compile_pipeline(m)
    report = count_moves(ctx.rg, len(m.states))
    normalized = normalize_zero_zero(m)
    print("adam moves: %d (expected 8)" % report.adam_count)
    print("eve moves: %d (bound 58m+227 = %d for m = %d)"
          % (report.eve_count, report.bound, report.source_states))
    print("states after zero-zero normalization: %d" % len(normalized.states))
    return 0 if report.adam_ok and report.eve_ok else 1


def cmd_verify(args) -> int:
    m = _load_machine(args.machine)
    names = solver.SCENARIOS if args.scenario == "all" else (args.scenario,)
    failed = False
    for name in names:
        try:
            report = solver.verify_lemma(m, name, args.depth)
        except solver.ScenarioFailure as exc:
            failed = True
            print("%s FAIL: %s" % (name, exc))
            continue
        print("%s ok (%d cases)" % (name, report.cases))
        for note in report.notes:
            print("  %s" % note)
    return 1 if failed else 0


class InteractiveHuman(strat.Strategy):
    """Text-mode move chooser: prints the position and reads an index from stdin."""

    def propose(self):
        options = engine.legal_moves(self.game, self.position)
        pos = self.position
        where = "" if pos.eve_state is None else " at %s" % pos.eve_state
        print("round %d, vector %s%s" % (self.round, pos.vector, where))
        for i, mv in enumerate(options):
            if isinstance(mv, RgsMove):
                print("  [%d] %s -> %s via %s" % (i, mv.src, mv.dst, mv.vec))
            else:
                print("  [%d] %s" % (i, mv))
        while True:
            line = sys.stdin.readline()
            if not line:
                raise EOFError
            line = line.strip()
            if line.isdigit() and int(line) < len(options):
                return options[int(line)]
            print("enter a move index between 0 and %d" % (len(options) - 1))


def _opponent(name: str, game, machine: Optional[MinskyMachine]):
    simple = {
        "first": _FirstLegal(),
        "wait": strat.adam_all_zero(),
    }
    if name in simple:
        return simple[name]
    if machine is None:
        raise RobotGamesError("opponent %r needs --machine for its bookkeeping" % name)
    ctx = compile_pipeline(machine)
    table = {
        "eve-sim-rgs": lambda: strat.eve_rgs_strategy(ctx.flagged, ctx.rgs),
        "adam-ref-rgs": lambda: strat.adam_rgs_referee(ctx.flagged, ctx.rgs),
        "eve-sim-rg": lambda: strat.eve_rg_strategy(ctx),
        "adam-ref-rg": lambda: strat.adam_rg_referee(ctx),
    }
    if name not in table:
        raise RobotGamesError("unknown opponent %r" % name)
    return table[name]()


class _FirstLegal(strat.Strategy):
    def propose(self):
        options = engine.legal_moves(self.game, self.position)
        if not options:
            raise strat.NoApplicableMove("no legal move")
        return options[0]


def cmd_play(args) -> int:
    with open(args.game, "r", encoding="utf-8") as handle:
        game = load_game(handle.read())
    if isinstance(game, (MatrixGame, FlaggedMachine)):
        raise RobotGamesError("interactive play works on rg and rgs games")
    machine = _load_machine(args.machine) if args.machine else None
    human = InteractiveHuman()
    other = _opponent(args.opponent, game, machine)
    if args.side == "adam":
        adam, eve = human, other
    else:
        adam, eve = other, human
    try:
        trace = engine.play(game, adam, eve, args.max_rounds)
    except EOFError:
        print("aborted")
        return 1
    print(trace.verdict)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="robotgames",
        description="Compile two-counter machines into vector reachability "
                    "games, play them, and verify the strategy scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a machine file")
    p.add_argument("machine")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="run a machine and print its trace")
    p.add_argument("machine")
    p.add_argument("--max-steps", type=int, default=1000)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reduce", help="compile a machine to a later stage")
    p.add_argument("machine")
    p.add_argument("--to", required=True,
                   choices=["normalized", "flags", "rgs", "rg", "matrix"])
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="bounded minimax from a game's initial vector")
    p.add_argument("game")
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--box", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("play", help="interactive text play against a strategy")
    p.add_argument("game")
    p.add_argument("--as", dest="side", required=True, choices=["adam", "eve"])
    p.add_argument("--opponent", required=True)
    p.add_argument("--machine", default=None)
    p.add_argument("--max-rounds", type=int, default=200)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("verify", help="run the lemma scenarios on a machine")
    p.add_argument("machine")
    p.add_argument("--scenario", required=True,
                   choices=list(solver.SCENARIOS) + ["all"])
    p.add_argument("--depth", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("count", help="move counts of the compiled stateless game")
    p.add_argument("machine")
    p.set_defaults(func=cmd_count)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print("parse error: %s" % exc, file=sys.stderr)
        return 2
    except ValidationError as exc:
        print("invalid machine: %s" % exc, file=sys.stderr)
        return 1
    except InvalidMachine as exc:
        print("invalid machine: %s" % exc, file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except RobotGamesError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Machine-to-game compiler and solving toolkit for two-dimensional vector games."""

from .models import (
    Counter,
    Flag,
    FlaggedState,
    Instruction,
    MachineConfig,
    MatrixGame,
    MinskyMachine,
    Op,
    RgsGame,
    RgsMove,
    RobotGame,
    RobotGamesError,
    Transition,
    Vec2,
    run_machine,
    step_machine,
    validate_machine,
)
from .reductions import (
    add_flags,
    apply_sequence,
    compile_pipeline,
    count_moves,
    matrix_from_rg,
    normalize_zero_zero,
    rg_from_rgs,
    rgs_from_2cm,
    update_vector,
)
from .engine import PlayTrace, Position, apply, legal_moves, play
from .solver import attractor, minimax_winner, verify_lemma

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

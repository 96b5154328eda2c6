"""Exact simulation of Schmidt's (alpha, beta)-game and finite-scale verification
of the strategies it supports: digit frequencies on the line, net strategies in
the hyperspace of compact sets and a branching strategy on Cantor-set functions.
"""

from .core import (
    ALICE,
    BOB,
    Ball,
    GameParams,
    Round,
    Strategy,
    Transcript,
    Turn,
    check_transcript,
    dumps_transcript,
    legal_move,
    loads_transcript,
    outcome_approx,
    play,
    radius_schedule,
)
from .errors import ConfigurationError, IllegalMoveError, InvariantViolation

__all__ = [
    "ALICE",
    "BOB",
    "Ball",
    "ConfigurationError",
    "GameParams",
    "IllegalMoveError",
    "InvariantViolation",
    "Round",
    "Strategy",
    "Transcript",
    "Turn",
    "check_transcript",
    "dumps_transcript",
    "legal_move",
    "loads_transcript",
    "outcome_approx",
    "play",
    "radius_schedule",
]

__version__ = "0.1.0"

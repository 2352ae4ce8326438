"""Deterministic simulation of the protocols under Byzantine behaviors."""

from .checkers import Verdict, check, check_broadcast, check_register
from .engine import Trace, run
from .scenario import (
    BroadcastProtocol,
    Crash,
    Equivocate,
    Honest,
    LieConfig,
    Mute,
    Op,
    RegisterProtocol,
    Scenario,
    WorstCase,
)
from .sweep import SweepReport, sweep

__all__ = [
    "BroadcastProtocol", "Crash", "Equivocate", "Honest", "LieConfig", "Mute", "Op",
    "RegisterProtocol", "Scenario", "SweepReport", "Trace", "Verdict", "WorstCase",
    "check", "check_broadcast", "check_register", "run", "sweep",
]

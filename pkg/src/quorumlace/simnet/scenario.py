"""Scenario description: who is faulty and how, and what the protocol does."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional, Union

from ..model import EMPTY_CONFIG, Configuration, ConfigError, Pfps


@dataclass(frozen=True)
class Honest:
    pass


@dataclass(frozen=True)
class Crash:
    """Stops reacting once the run has processed ``step`` events."""

    step: int


@dataclass(frozen=True)
class Mute:
    pass


@dataclass(frozen=True)
class LieConfig:
    """Follows the protocol but advertises ``advertised`` in every message."""

    advertised: Configuration = EMPTY_CONFIG


@dataclass(frozen=True)
class Equivocate:
    """Broadcast sender that sends ``value`` to the first group and ``other`` to the second."""

    partition: tuple
    value: str
    other: str


@dataclass(frozen=True)
class WorstCase:
    """Advertises the empty configuration, the smallest-quorum lie."""


Behavior = Union[Honest, Crash, Mute, LieConfig, Equivocate, WorstCase]


@dataclass(frozen=True)
class BroadcastProtocol:
    sender: str
    value: str


@dataclass(frozen=True)
class Op:
    """One register invocation.  It is issued ``delay`` time units after the
    op at index ``after`` completes (or after the start) and after the
    previous op of the same process completes."""

    process: str
    kind: str
    value: Optional[str] = None
    after: Optional[int] = None
    delay: int = 0


@dataclass(frozen=True)
class RegisterProtocol:
    writer: str
    script: tuple = ()


Protocol = Union[BroadcastProtocol, RegisterProtocol]


@dataclass(frozen=True)
class Scenario:
    pfps: Pfps
    league: frozenset
    protocol: Protocol
    faulty: Mapping = field(default_factory=dict)
    seed: int = 0
    max_steps: int = 100_000
    adversarial_target: Optional[str] = None

    def __post_init__(self) -> None:
        u = self.pfps.universe
        object.__setattr__(self, "league", frozenset(self.league))
        object.__setattr__(self, "faulty", {p: self.faulty[p] for p in sorted(self.faulty)})
        if not self.league <= u:
            raise ConfigError(f"league mentions unknown processes {sorted(self.league - u)}")
        if not set(self.faulty) <= u:
            raise ConfigError(f"faulty map mentions unknown processes {sorted(set(self.faulty) - u)}")
        if self.max_steps <= 0:
            raise ConfigError("max_steps must be positive")
        if self.adversarial_target is not None and self.adversarial_target not in u:
            raise ConfigError(f"adversarial target {self.adversarial_target} is not in the universe")
        proto = self.protocol
        if isinstance(proto, BroadcastProtocol):
            if proto.sender not in u:
                raise ConfigError(f"sender {proto.sender} is not in the universe")
            for p, b in self.faulty.items():
                if isinstance(b, Equivocate) and p != proto.sender:
                    raise ConfigError(f"{p} cannot equivocate: only the broadcast sender can")
        elif isinstance(proto, RegisterProtocol):
            if proto.writer not in u:
                raise ConfigError(f"writer {proto.writer} is not in the universe")
            for i, op in enumerate(proto.script):
                if op.kind not in ("write", "read"):
                    raise ConfigError(f"op {i}: kind must be write or read")
                if op.process not in u:
                    raise ConfigError(f"op {i}: unknown process {op.process}")
                if op.kind == "write" and (op.process != proto.writer or op.value is None):
                    raise ConfigError(f"op {i}: writes need the writer and a value")
                if op.after is not None and not 0 <= op.after < i:
                    raise ConfigError(f"op {i}: 'after' must name an earlier op")
            if any(isinstance(b, Equivocate) for b in self.faulty.values()):
                raise ConfigError("equivocation only applies to the broadcast sender")
        else:
            raise ConfigError(f"unknown protocol {proto!r}")

    @property
    def faulty_set(self) -> frozenset:
        return frozenset(p for p, b in self.faulty.items() if not isinstance(b, Honest))

    @property
    def correct(self) -> frozenset:
        return self.pfps.universe - self.faulty_set

"""Protocol messages, state-machine actions and their wire encoding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..model import EMPTY_CONFIG, Configuration, ContractError, normalize_config, set_key

SEND, ECHO, READY, ANY = "SEND", "ECHO", "READY", "ANY"
WRITE, ACK, READ, VALUE = "WRITE", "ACK", "READ", "VALUE"

# Fields each kind must carry besides ``kind``, ``sender`` and ``config``.
REQUIRED = {
    SEND: ("value",),
    ECHO: ("value",),
    READY: ("value",),
    ANY: ("star",),
    WRITE: ("ts", "value", "signature"),
    ACK: ("ts",),
    READ: ("rid",),
    VALUE: ("rid", "ts", "value", "signature"),
}
_OPTIONAL = ("value", "ts", "rid", "signature", "star")


class MalformedMessage(ContractError):
    """A message whose fields do not match its kind."""


class _Star:
    """The ★ marker recorded for ANY senders.  It never equals a value."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "★"


STAR = _Star()


@dataclass(frozen=True)
class Message:
    kind: str
    sender: str
    config: Configuration
    value: Optional[str] = None
    ts: Optional[int] = None
    rid: Optional[int] = None
    signature: Optional[str] = None
    star: bool = False

    def validate(self) -> None:
        if self.kind not in REQUIRED:
            raise MalformedMessage(f"unknown message kind {self.kind!r}")
        if not isinstance(self.sender, str) or not self.sender:
            raise MalformedMessage("sender must be a non-empty id")
        if not isinstance(self.config, Configuration):
            raise MalformedMessage(f"{self.kind} from {self.sender} carries no configuration")
        need = REQUIRED[self.kind]
        for name in _OPTIONAL:
            val = getattr(self, name)
            present = val is not None and val is not False
            if name == "value" and self.kind == VALUE and self.ts == 0:
                # the initial tuple carries the initial value ⊥₀
                present = True
            if present != (name in need):
                word = "missing" if name in need else "unexpected"
                raise MalformedMessage(f"{self.kind} from {self.sender}: {word} field {name!r}")
        for name in ("ts", "rid"):
            val = getattr(self, name)
            if val is not None and (not isinstance(val, int) or isinstance(val, bool) or val < 0):
                raise MalformedMessage(f"{self.kind} from {self.sender}: {name} must be a non-negative integer")
        if self.value is not None and not isinstance(self.value, str):
            raise MalformedMessage(f"{self.kind} from {self.sender}: value must be a string")

    def to_wire(self) -> dict:
        out = {"kind": self.kind, "sender": self.sender}
        for name in REQUIRED[self.kind]:
            out[name] = getattr(self, name)
        out["config"] = config_to_json(self.config)
        return out

    @classmethod
    def from_wire(cls, raw: dict) -> "Message":
        fields = {k: raw[k] for k in _OPTIONAL if k in raw}
        msg = cls(raw["kind"], raw["sender"], config_from_json(raw["config"]), **fields)
        msg.validate()
        return msg


def config_to_json(c: Configuration) -> dict:
    return {"trusted": sorted(c.trusted), "fail_prone": [sorted(f) for f in sorted(c.fail_prone, key=set_key)]}


def config_from_json(raw: dict) -> Configuration:
    if not raw["trusted"]:
        return EMPTY_CONFIG
    return normalize_config(raw["trusted"], raw["fail_prone"])


@dataclass(frozen=True)
class Gossip:
    message: Message


@dataclass(frozen=True)
class GossipTo:
    target: str
    message: Message


@dataclass(frozen=True)
class Deliver:
    value: str


@dataclass(frozen=True)
class WriteReturn:
    ts: int


@dataclass(frozen=True)
class ReadReturn:
    value: Optional[str]


Action = Union[Gossip, GossipTo, Deliver, WriteReturn, ReadReturn]

"""Single-writer multi-reader regular register over permissionless quorums,
as a pure state machine."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from ..model import Configuration, ContractError, View, contains_quorum, max_closed_subset
from .messages import ACK, READ, VALUE, WRITE, GossipTo, Gossip, MalformedMessage, Message, ReadReturn, WriteReturn
from .signatures import GENESIS, SignatureScheme, write_payload


@dataclass(frozen=True)
class Write:
    value: str


@dataclass(frozen=True)
class Read:
    pass


Event = Union[Message, Write, Read]


@dataclass(frozen=True)
class RegisterState:
    process: str
    own_config: Configuration
    writer: str
    view: View
    scheme: SignatureScheme = field(compare=False, repr=False)
    ts_w: int = 0
    id_r: int = 0
    stored: tuple = (0, None, GENESIS)
    pending_write: Optional[int] = None
    acks: frozenset = frozenset()
    pending_read: Optional[int] = None
    responses: dict = field(default_factory=dict)
    diagnostics: tuple = ()

    @property
    def busy(self) -> bool:
        return self.pending_write is not None or self.pending_read is not None


def initial_register_state(
    process: str, own_config: Configuration, writer: str, universe: Iterable[str], scheme: SignatureScheme
) -> RegisterState:
    return RegisterState(process, own_config, writer, View({process: own_config}, universe), scheme)


def highestval(pairs: Iterable[tuple]) -> Optional[str]:
    """Value of the pair with the largest timestamp; ties go to the least value."""
    pairs = list(pairs)
    if not pairs:
        raise ContractError("highestval needs at least one (ts, value) pair")
    top = max(ts for ts, _ in pairs)
    values = [v for ts, v in pairs if ts == top]
    return min(values, key=lambda v: (v is not None, v or ""))


def _learn(view: View, me: str, j: str, cfg: Configuration) -> View:
    # a process always knows its own configuration; echoes of it change nothing
    return view if j == me else view.updated({j: cfg})


def _drop(st: RegisterState, why: str) -> tuple:
    return replace(st, diagnostics=st.diagnostics + (why,)), []


def reg_step(state: RegisterState, event: Event) -> tuple:
    """Apply one event; returns ``(new_state, actions)``.  ``state`` is not mutated."""
    st = state
    me, cfg = st.process, st.own_config
    if isinstance(event, Write):
        if me != st.writer:
            raise ContractError(f"write invoked at {me}, the writer is {st.writer}")
        if st.busy:
            raise ContractError(f"{me} invoked write while an operation is pending")
        ts = st.ts_w + 1
        sig = st.scheme.sign(me, write_payload(me, ts, event.value))
        st = replace(st, ts_w=ts, pending_write=ts, acks=frozenset())
        return st, [Gossip(Message(WRITE, me, cfg, value=event.value, ts=ts, signature=sig))]
    if isinstance(event, Read):
        if st.busy:
            raise ContractError(f"{me} invoked read while an operation is pending")
        rid = st.id_r + 1
        st = replace(st, id_r=rid, pending_read=rid, responses={})
        return st, [Gossip(Message(READ, me, cfg, rid=rid))]
    if not isinstance(event, Message):
        raise ContractError(f"unknown event {event!r}")
    try:
        event.validate()
    except MalformedMessage as exc:
        return _drop(st, f"dropped: {exc}")
    j = event.sender
    if j not in st.view.universe:
        return _drop(st, f"dropped {event.kind} from unknown process {j}")
    if event.kind == WRITE:
        if j != st.writer:
            return _drop(st, f"dropped WRITE from non-writer {j}")
        if event.ts > st.stored[0]:
            st = replace(st, view=_learn(st.view, st.process, j, event.config), stored=(event.ts, event.value, event.signature))
        return st, [GossipTo(j, Message(ACK, me, cfg, ts=event.ts))]
    if event.kind == ACK:
        if st.pending_write is None or event.ts != st.pending_write:
            return st, []
        st = replace(st, view=_learn(st.view, st.process, j, event.config), acks=st.acks | {j})
        if contains_quorum(st.acks, me, st.view):
            done = st.pending_write
            return replace(st, pending_write=None), [WriteReturn(done)]
        return st, []
    if event.kind == READ:
        ts, value, sig = st.stored
        st = replace(st, view=_learn(st.view, st.process, j, event.config))
        return st, [GossipTo(j, Message(VALUE, me, cfg, value=value, ts=ts, rid=event.rid, signature=sig))]
    if event.kind == VALUE:
        if st.pending_read is None or event.rid != st.pending_read or j in st.responses:
            return st, []
        if not st.scheme.verify(st.writer, event.signature, write_payload(st.writer, event.ts, event.value)):
            return _drop(st, f"dropped VALUE from {j}: signature does not verify")
        st = replace(
            st, view=_learn(st.view, st.process, j, event.config), responses={**st.responses, j: (event.ts, event.value)}
        )
        if contains_quorum(frozenset(st.responses), me, st.view):
            quorum = max_closed_subset(frozenset(st.responses), st.view)
            result = highestval(st.responses[p] for p in quorum)
            return replace(st, pending_read=None), [ReadReturn(result)]
        return st, []
    return _drop(st, f"dropped {event.kind} from {j}: not a register message")

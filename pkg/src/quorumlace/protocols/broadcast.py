"""Byzantine reliable broadcast over permissionless quorums, as a pure state machine.

Clauses, in the order they appear in the protocol:

(a) the sender gossips SEND on r-broadcast;
(b) the first SEND from the sender triggers an ECHO;
(c) ECHOs are recorded once per process;
(d) a quorum of matching ECHOs triggers READY;
(e) READYs are recorded once per process;
(f) a blocking set of matching READYs triggers READY (amplification);
(g) being blocked by a second value after readying triggers ANY;
(h) an ANY marks its sender's ready entry with ★;
(i) a quorum of matching READYs triggers r-deliver.

Guards (d), (f), (g), (i) are re-evaluated in that order after every event
until none fires.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Union

from ..model import Configuration, ContractError, View, blocks, contains_quorum
from .messages import ANY, ECHO, READY, SEND, STAR, Deliver, Gossip, MalformedMessage, Message


@dataclass(frozen=True)
class RBroadcast:
    value: str


@dataclass(frozen=True)
class Tick:
    pass


Event = Union[Message, RBroadcast, Tick]


@dataclass(frozen=True)
class BroadcastState:
    process: str
    own_config: Configuration
    sender: str
    view: View
    echos: dict = field(default_factory=dict)
    readys: dict = field(default_factory=dict)
    sent_echo: bool = False
    sent_ready: bool = False
    sent_any: bool = False
    delivered: bool = False
    diagnostics: tuple = ()


def initial_broadcast_state(process: str, own_config: Configuration, sender: str, universe) -> BroadcastState:
    view = View({process: own_config}, universe)
    return BroadcastState(process, own_config, sender, view)


def _matching(values: dict, v) -> frozenset:
    return frozenset(j for j, x in values.items() if x == v and x is not STAR)


def evaluate_quorum_guard(values: dict, v, process: str, view: View) -> bool:
    """Whether the processes reporting ``v`` contain a quorum for ``process``."""
    if view[process] is None:
        raise ContractError(f"{process} does not know its own configuration")
    if v is None or v is STAR:
        return False
    matching = _matching(values, v)
    return bool(matching) and contains_quorum(matching, process, view)


def _candidates(values: dict) -> list:
    return sorted({x for x in values.values() if x is not None and x is not STAR})


def _any_clause_enabled() -> bool:
    return True


def _fire_guards(st: BroadcastState) -> tuple:
    actions: list = []
    cfg = st.own_config
    while True:
        fired = False
        if not st.sent_ready:
            for v in _candidates(st.echos):
                if evaluate_quorum_guard(st.echos, v, st.process, st.view):
                    st = replace(st, sent_ready=True)
                    actions.append(Gossip(Message(READY, st.process, cfg, value=v)))
                    fired = True
                    break
        if not st.sent_ready:
            for v in _candidates(st.readys):
                if blocks(_matching(st.readys, v), st.process, cfg):
                    st = replace(st, sent_ready=True)
                    actions.append(Gossip(Message(READY, st.process, cfg, value=v)))
                    fired = True
                    break
        mine = st.readys.get(st.process)
        if st.sent_ready and not st.sent_any and mine is not None and mine is not STAR and _any_clause_enabled():
            for v in _candidates(st.readys):
                if v != mine and blocks(_matching(st.readys, v), st.process, cfg):
                    st = replace(st, sent_any=True)
                    actions.append(Gossip(Message(ANY, st.process, cfg, star=True)))
                    fired = True
                    break
        if not st.delivered:
            for v in _candidates(st.readys):
                if evaluate_quorum_guard(st.readys, v, st.process, st.view):
                    st = replace(st, delivered=True)
                    actions.append(Deliver(v))
                    fired = True
                    break
        if not fired:
            return st, actions


def _learn(view: View, me: str, j: str, cfg: Configuration) -> View:
    # a process always knows its own configuration; echoes of it change nothing
    return view if j == me else view.updated({j: cfg})


def _drop(st: BroadcastState, why: str) -> tuple:
    return replace(st, diagnostics=st.diagnostics + (why,)), []


def rb_step(state: BroadcastState, event: Event) -> tuple:
    """Apply one event; returns ``(new_state, actions)``.  ``state`` is not mutated."""
    st = state
    actions: list = []
    if isinstance(event, RBroadcast):
        if st.process != st.sender:
            raise ContractError(f"r-broadcast invoked at {st.process}, the sender is {st.sender}")
        actions.append(Gossip(Message(SEND, st.process, st.own_config, value=event.value)))
    elif isinstance(event, Message):
        try:
            event.validate()
        except MalformedMessage as exc:
            return _drop(st, f"dropped: {exc}")
        j, cfg = event.sender, event.config
        if j not in st.view.universe:
            return _drop(st, f"dropped {event.kind} from unknown process {j}")
        if event.kind == SEND:
            if j != st.sender:
                return _drop(st, f"dropped SEND from non-sender {j}")
            if not st.sent_echo:
                st = replace(st, sent_echo=True, view=_learn(st.view, st.process, j, cfg))
                actions.append(Gossip(Message(ECHO, st.process, st.own_config, value=event.value)))
        elif event.kind == ECHO:
            if st.echos.get(j) is None:
                st = replace(st, view=_learn(st.view, st.process, j, cfg), echos={**st.echos, j: event.value})
        elif event.kind == READY:
            if st.readys.get(j) is None:
                st = replace(st, view=_learn(st.view, st.process, j, cfg), readys={**st.readys, j: event.value})
        elif event.kind == ANY:
            st = replace(st, view=_learn(st.view, st.process, j, cfg), readys={**st.readys, j: STAR})
        else:
            return _drop(st, f"dropped {event.kind} from {j}: not a broadcast message")
    elif not isinstance(event, Tick):
        raise ContractError(f"unknown event {event!r}")
    st, more = _fire_guards(st)
    return st, actions + more

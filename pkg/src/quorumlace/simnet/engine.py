"""Deterministic discrete-event execution of a scenario."""

from __future__ import annotations

import heapq
import json
import random
from dataclasses import dataclass, field, replace

from ..protocols.broadcast import RBroadcast, initial_broadcast_state, rb_step
from ..protocols.messages import (
    SEND,
    Deliver,
    Gossip,
    GossipTo,
    Message,
    ReadReturn,
    WriteReturn,
)
from ..protocols.register import Read, Write, initial_register_state, reg_step
from ..protocols.signatures import MockSignatureScheme
from .scenario import BroadcastProtocol, Crash, Equivocate, Honest, LieConfig, Mute, Scenario, WorstCase

MAX_DELAY = 10
ADVERSARIAL_EXTRA = (20, 60)
TRACE_FORMAT = 1


@dataclass
class Trace:
    records: list = field(default_factory=list)
    truncated: bool = False
    steps: int = 0
    meta: dict = field(default_factory=dict)

    def append(self, kind: str, process: str, payload: dict) -> None:
        self.records.append((len(self.records), kind, process, payload))

    def of_kind(self, kind: str) -> list:
        return [r for r in self.records if r[1] == kind]

    def to_jsonl(self) -> str:
        header = {"format": TRACE_FORMAT, **self.meta, "truncated": self.truncated, "steps": self.steps}
        lines = [json.dumps(header, ensure_ascii=False, separators=(",", ":"))]
        for step, kind, process, payload in self.records:
            rec = {"step": step, "kind": kind, "process": process, "payload": payload}
            lines.append(json.dumps(rec, ensure_ascii=False, separators=(",", ":")))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "Trace":
        lines = [json.loads(line) for line in text.splitlines() if line.strip()]
        header = lines[0]
        if header.get("format") != TRACE_FORMAT:
            raise ValueError(f"unsupported trace format {header.get('format')!r}")
        meta = {k: v for k, v in header.items() if k not in ("format", "truncated", "steps")}
        records = [(r["step"], r["kind"], r["process"], r["payload"]) for r in lines[1:]]
        return cls(records, header["truncated"], header["steps"], meta)


def _advertised(msg: Message, behavior) -> Message:
    if isinstance(behavior, LieConfig):
        return replace(msg, config=behavior.advertised)
    if isinstance(behavior, WorstCase):
        return replace(msg, config=LieConfig().advertised)
    return msg


class _Run:
    def __init__(self, scenario: Scenario) -> None:
        self.sc = scenario
        self.rng = random.Random(scenario.seed)
        self.universe = sorted(scenario.pfps.universe)
        self.behavior = {p: scenario.faulty.get(p, Honest()) for p in self.universe}
        self.queue: list = []
        self.seq = 0
        self.now = 0
        self.processed = 0
        self.trace = Trace(meta={"seed": scenario.seed})
        proto = scenario.protocol
        if isinstance(proto, BroadcastProtocol):
            self.step_fn = rb_step
            self.states = {
                p: initial_broadcast_state(p, scenario.pfps.config(p), proto.sender, self.universe)
                for p in self.universe
            }
            self.trace.meta["protocol"] = "broadcast"
        else:
            self.step_fn = reg_step
            self.scheme = MockSignatureScheme()
            self.states = {
                p: initial_register_state(p, scenario.pfps.config(p), proto.writer, self.universe, self.scheme)
                for p in self.universe
            }
            self.trace.meta["protocol"] = "register"
            self.done: set = set()
            self.issued: set = set()
            self.current: dict = {}

    def push(self, at: int, item: tuple) -> None:
        heapq.heappush(self.queue, (at, self.seq, item))
        self.seq += 1

    def silent(self, p: str) -> bool:
        b = self.behavior[p]
        return isinstance(b, Mute) or (isinstance(b, Crash) and self.processed >= b.step)

    def delay(self, src: str) -> int:
        d = self.rng.randint(1, MAX_DELAY)
        if src == self.sc.adversarial_target:
            d += self.rng.randint(*ADVERSARIAL_EXTRA)
        return d

    def transmit(self, src: str, msg: Message, targets: list) -> None:
        self.trace.append("send", src, {"to": targets, "msg": msg.to_wire()})
        for t in targets:
            self.push(self.now + self.delay(src), ("msg", t, msg))

    def emit(self, p: str, actions: list) -> None:
        b = self.behavior[p]
        for act in actions:
            if isinstance(act, Gossip):
                msg = _advertised(act.message, b)
                if isinstance(b, Equivocate) and msg.kind == SEND:
                    first, second = (sorted(g) for g in b.partition)
                    self.transmit(p, replace(msg, value=b.value), first)
                    self.transmit(p, replace(msg, value=b.other), second)
                else:
                    self.transmit(p, msg, self.universe)
            elif isinstance(act, GossipTo):
                self.transmit(p, _advertised(act.message, b), [act.target])
            elif isinstance(act, Deliver):
                self.trace.append("output", p, {"deliver": act.value})
            elif isinstance(act, WriteReturn):
                self.finish(p, {"op": "write", "index": self.current.pop(p), "ts": act.ts})
            elif isinstance(act, ReadReturn):
                self.finish(p, {"op": "read", "index": self.current.pop(p), "value": act.value})

    def finish(self, p: str, payload: dict) -> None:
        self.trace.append("output", p, payload)
        self.done.add(payload["index"])
        self.schedule_ops()

    def schedule_ops(self) -> None:
        script = self.sc.protocol.script
        for i, op in enumerate(script):
            if i in self.issued:
                continue
            if op.after is not None and op.after not in self.done:
                continue
            earlier = [k for k in range(i) if script[k].process == op.process]
            if earlier and earlier[-1] not in self.done:
                continue
            self.issued.add(i)
            self.push(self.now + op.delay, ("invoke", i))

    def invoke(self, item) -> None:
        proto = self.sc.protocol
        if isinstance(proto, BroadcastProtocol):
            p = proto.sender
            self.trace.append("invoke", p, {"op": "r-broadcast", "value": proto.value})
            if self.silent(p):
                return
            self.states[p], actions = rb_step(self.states[p], RBroadcast(proto.value))
            self.emit(p, actions)
            return
        op = proto.script[item]
        p = op.process
        payload = {"op": op.kind, "index": item}
        if op.kind == "write":
            payload["value"] = op.value
        self.trace.append("invoke", p, payload)
        if self.silent(p):
            return
        self.current[p] = item
        event = Write(op.value) if op.kind == "write" else Read()
        self.states[p], actions = reg_step(self.states[p], event)
        self.emit(p, actions)

    def run(self) -> Trace:
        if isinstance(self.sc.protocol, BroadcastProtocol):
            self.push(0, ("invoke", None))
        else:
            self.schedule_ops()
        while self.queue and self.processed < self.sc.max_steps:
            self.now, _, item = heapq.heappop(self.queue)
            self.processed += 1
            if item[0] == "invoke":
                self.invoke(item[1])
                continue
            _, dst, msg = item
            self.trace.append("deliver-msg", dst, {"from": msg.sender, "msg": msg.to_wire()})
            if self.silent(dst):
                continue
            self.states[dst], actions = self.step_fn(self.states[dst], msg)
            self.emit(dst, actions)
        self.trace.truncated = bool(self.queue)
        self.trace.steps = self.processed
        return self.trace


def run(scenario: Scenario) -> Trace:
    """Execute ``scenario`` to quiescence or ``max_steps``.  Same scenario, same trace."""
    return _Run(scenario).run()

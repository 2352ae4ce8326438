"""Property checkers for broadcast and register traces.

Safety clauses are checked on every trace.  Liveness clauses (Validity and
Totality for broadcast, Termination for the register) only mean something
once the run is quiescent, so they are skipped on truncated traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import fmt_set, tolerated_by
from .engine import Trace
from .scenario import BroadcastProtocol, RegisterProtocol, Scenario

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"
OK, VIOLATION, PRECONDITION = "ok", "violation", "precondition-unsatisfied"


@dataclass
class Verdict:
    status: str
    properties: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    truncated: bool = False
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status != VIOLATION

    def _set(self, name: str, passed: bool, why: str = "") -> None:
        if passed:
            self.properties.setdefault(name, PASS)
        else:
            self.properties[name] = FAIL
            self.violations.append(f"{name}: {why}")

    def _finish(self) -> "Verdict":
        self.status = VIOLATION if self.violations else OK
        return self


def _precondition(trace: Trace, scenario: Scenario):
    faulty = scenario.faulty_set
    if not tolerated_by(scenario.league, scenario.pfps, faulty):
        note = f"faulty set {fmt_set(faulty)} is not tolerated by league {fmt_set(scenario.league)}"
        return Verdict(PRECONDITION, truncated=trace.truncated, note=note)
    return None


def check_broadcast(trace: Trace, scenario: Scenario) -> Verdict:
    proto = scenario.protocol
    if not isinstance(proto, BroadcastProtocol):
        raise TypeError("check_broadcast needs a broadcast scenario")
    early = _precondition(trace, scenario)
    if early:
        return early
    v = Verdict(OK, truncated=trace.truncated)
    live = not trace.truncated
    members = scenario.league & scenario.correct
    sender_correct = proto.sender in scenario.correct
    delivered: dict = {}
    for _, _, p, payload in trace.of_kind("output"):
        delivered.setdefault(p, []).append(payload["deliver"])

    for p in sorted(scenario.correct):
        got = delivered.get(p, [])
        v._set("integrity", len(got) <= 1, f"{p} delivered {len(got)} times: {got}")
        if sender_correct and p in members and got:
            v._set("integrity", all(x == proto.value for x in got), f"{p} delivered {got[0]!r}, sender broadcast {proto.value!r}")
    values = sorted({x for p in members for x in delivered.get(p, [])})
    v._set("consistency", len(values) <= 1, f"league members delivered different values {values}")

    missing = sorted(p for p in members if not delivered.get(p))
    if not live:
        v.properties.update(validity=SKIPPED, totality=SKIPPED, cascade=SKIPPED)
        return v._finish()
    if sender_correct:
        v._set("validity", not missing, f"correct league members {missing} did not deliver")
    else:
        v.properties["validity"] = SKIPPED
    if values:
        v._set("totality", not missing, f"{missing} did not deliver although others did")
    else:
        v.properties["totality"] = PASS
    if sender_correct and values:
        ready = {
            p
            for _, _, p, payload in trace.of_kind("send")
            if payload["msg"]["kind"] == "READY" and payload["msg"]["value"] == proto.value
        }
        gap = sorted(members - ready)
        v._set("cascade", not gap, f"{gap} never sent READY for the delivered value")
    else:
        v.properties["cascade"] = SKIPPED
    return v._finish()


def check_register(trace: Trace, scenario: Scenario) -> Verdict:
    proto = scenario.protocol
    if not isinstance(proto, RegisterProtocol):
        raise TypeError("check_register needs a register scenario")
    early = _precondition(trace, scenario)
    if early:
        return early
    members = scenario.league & scenario.correct
    if proto.writer not in members:
        return Verdict(PRECONDITION, truncated=trace.truncated, note=f"writer {proto.writer} is not a correct league member")
    v = Verdict(OK, truncated=trace.truncated)
    invoked, returned = {}, {}
    for step, kind, p, payload in trace.records:
        if kind == "invoke":
            invoked[payload["index"]] = step
        elif kind == "output":
            returned[payload["index"]] = (step, payload)
    script = proto.script

    if trace.truncated:
        v.properties["termination"] = SKIPPED
    else:
        for i in sorted(invoked):
            if script[i].process in members:
                v._set("termination", i in returned, f"op {i} ({script[i].kind} at {script[i].process}) never returned")
        v.properties.setdefault("termination", PASS)

    writes = sorted((invoked[i], returned.get(i, (None,))[0], script[i].value) for i in invoked if script[i].kind == "write")
    for i in sorted(returned):
        op = script[i]
        if op.kind != "read" or op.process not in members:
            continue
        start, end = invoked[i], returned[i][0]
        got = returned[i][1]["value"]
        completed = [w for w in writes if w[1] is not None and w[1] < start]
        allowed = {completed[-1][2] if completed else None}
        allowed |= {w[2] for w in writes if w[0] < end and (w[1] is None or w[1] > start)}
        v._set("validity", got in allowed, f"read {i} at {op.process} returned {got!r}, allowed {sorted(allowed, key=str)}")
    v.properties.setdefault("validity", PASS)
    return v._finish()


def check(trace: Trace, scenario: Scenario) -> Verdict:
    if isinstance(scenario.protocol, BroadcastProtocol):
        return check_broadcast(trace, scenario)
    return check_register(trace, scenario)

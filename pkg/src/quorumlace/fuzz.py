"""Randomized cross-checks of the model and league algorithms against the
subset-enumeration oracle.

Each property takes a generated instance and returns a list of
counterexample descriptions (empty when the property holds).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import oracle
from .bridges import SymmetricSystem, pbqs_quorum_check, q3_check, q3_equivalence_harness
from .generators import random_partial_view, random_pfps, random_resilient_view, random_symmetric_family
from .league import LeagueAnalyzer
from .model import (
    Pfps,
    blocked_closure,
    blocks,
    fmt_set,
    is_quorum,
    quorums,
    set_key,
    subsets,
    survivor_sets,
    tolerates,
    worst_case_view,
)


@dataclass
class Instance:
    index: int
    rng: random.Random
    pfps: Pfps
    analyzer: LeagueAnalyzer
    _leagues: Optional[list] = None

    def sample_sets(self, k: int) -> list:
        """The universe plus ``k`` random non-empty subsets."""
        ids = sorted(self.pfps.universe)
        out = {frozenset(ids)}
        for _ in range(k):
            out.add(frozenset(self.rng.sample(ids, self.rng.randint(1, len(ids)))))
        return sorted(out, key=set_key)

    def leagues(self) -> list:
        """Every non-empty league, per the oracle."""
        if self._leagues is None:
            self._leagues = [l for l in subsets(self.pfps.universe) if l and oracle.is_league(l, self.pfps)]
        return self._leagues


def prop_tolerance(inst: Instance) -> list:
    f, out = inst.pfps, []
    for a in subsets(f.universe):
        gfp = oracle.satisfied_gfp(f, a)
        for p in sorted(f.universe - a):
            got = tolerates(p, f, a)
            if got != oracle.survivor_set_avoiding(p, f, a) or got != (p in gfp):
                out.append(f"{p} with A={fmt_set(a)}: tolerates={got}")
    return out


def prop_survivor_quorum(inst: Instance) -> list:
    f, out = inst.pfps, []
    for p in sorted(f.universe):
        truth = oracle.closed_rooted(p, f)
        if set(quorums(p, f, minimal_only=False)) != truth:
            out.append(f"{p}: quorums in the full view differ from closed rooted sets")
        if set(survivor_sets(p, f, include_all=True)) != truth:
            out.append(f"{p}: survivor sets differ from closed rooted sets")
        for s in survivor_sets(p, f):
            if not is_quorum(s, p, f):
                out.append(f"{p}: survivor set {fmt_set(s)} is not a quorum in the full view")
        v = random_partial_view(f, inst.rng, p)
        if set(quorums(p, v, minimal_only=False)) != oracle.quorum_family(p, v):
            out.append(f"{p}: quorums in a partial view differ from the oracle")
    return out


def prop_worst_case_quorum(inst: Instance) -> list:
    f, out = inst.pfps, []
    for t in inst.sample_sets(4) + [frozenset()]:
        base = worst_case_view(f, t)
        for p in sorted(f.universe - t):
            small = quorums(p, base)
            v = random_resilient_view(f, t, inst.rng)
            for q in oracle.quorum_family(p, v):
                if not any(s <= q for s in small):
                    out.append(f"{p}, T={fmt_set(t)}: quorum {fmt_set(q)} holds no worst-case quorum")
    return out


def prop_inclusive_quorum(inst: Instance) -> list:
    f, out = inst.pfps, []
    for t in inst.sample_sets(3) + [frozenset()]:
        base = worst_case_view(f, t)
        for p in sorted(f.universe - t):
            inclusive = oracle.inclusive_rooted(p, t, f, minimal=False)
            v = random_resilient_view(f, t, inst.rng)
            for q in oracle.quorum_family(p, v):
                if q not in inclusive:
                    out.append(f"{p}, T={fmt_set(t)}: quorum {fmt_set(q)} is not inclusive up to T")
            for i in inclusive:
                if not is_quorum(i, p, base):
                    out.append(f"{p}, T={fmt_set(t)}: {fmt_set(i)} is not a worst-case quorum")
    return out


def prop_consistency(inst: Instance) -> list:
    out = []
    for l in inst.sample_sets(5):
        got, _ = inst.analyzer.check_consistency(l)
        want, _ = oracle.consistency(l, inst.pfps)
        if got != want:
            out.append(f"consistency of {fmt_set(l)}: view-free {got}, direct {want}")
    return out


def prop_availability(inst: Instance) -> list:
    out = []
    for l in inst.sample_sets(5):
        got, _ = inst.analyzer.check_availability(l)
        want, _ = oracle.availability(l, inst.pfps)
        if got != want:
            out.append(f"availability of {fmt_set(l)}: view-free {got}, direct {want}")
    return out


def prop_blocked_closure(inst: Instance) -> list:
    f, out = inst.pfps, []
    for b in inst.sample_sets(3):
        if blocked_closure(b, f) != oracle.blocked_closure(b, f):
            out.append(f"blocked closure of {fmt_set(b)} differs from the oracle")
    for l in inst.leagues():
        for t in oracle.tolerated_family(l, f):
            hit = blocked_closure(t, f) & (l - t)
            if hit:
                out.append(f"L={fmt_set(l)}, T={fmt_set(t)}: {fmt_set(hit)} inductively blocked")
    return out


def prop_pbqs(inst: Instance) -> list:
    f, out = inst.pfps, []
    for p in sorted(f.universe):
        for v in (f, random_partial_view(f, inst.rng, p)):
            for q in oracle.quorum_family(p, v):
                if not pbqs_quorum_check(q, p, f, v):
                    out.append(f"{p}: quorum {fmt_set(q)} fails the PBQS check")
    return out


def prop_cascade(inst: Instance) -> list:
    """Starting from B = Q ∖ T for a quorum Q of a league member, keep adding
    a process outside B ∪ T that B blocks; the cascade must reach L ∖ T."""
    f, out = inst.pfps, []
    for l in inst.leagues():
        for t in oracle.tolerated_family(l, f):
            v = random_resilient_view(f, t, inst.rng)
            for p in sorted(l - t):
                for q in sorted(oracle.quorum_family(p, v), key=set_key)[:3]:
                    b = set(q - t)
                    while not (l - t) <= b:
                        nxt = [j for j in sorted(f.universe - b - t) if blocks(b, j, f.config(j))]
                        if not nxt:
                            out.append(f"L={fmt_set(l)}, T={fmt_set(t)}: cascade from {fmt_set(q)} stops at {fmt_set(b)}")
                            break
                        b.add(nxt[0])
    return out


def prop_q3_equivalence(inst: Instance) -> list:
    n = len(inst.pfps.universe)
    universe, family = random_symmetric_family(n, inst.rng)
    s = SymmetricSystem.make(universe, family)
    res = q3_equivalence_harness(s)
    expected = not oracle.covers_three(s.universe, s.fail_prone)
    if not res.agree or q3_check(s)[0] != expected:
        return [f"{sorted(family, key=set_key)}: q3={res.condition} league={res.league} oracle={expected}"]
    return []


PROPERTIES: dict = {
    "tolerance": prop_tolerance,
    "survivor-quorum": prop_survivor_quorum,
    "worst-case-quorum": prop_worst_case_quorum,
    "inclusive-quorum": prop_inclusive_quorum,
    "consistency": prop_consistency,
    "availability": prop_availability,
    "blocked-closure": prop_blocked_closure,
    "pbqs": prop_pbqs,
    "cascade": prop_cascade,
    "q3-equivalence": prop_q3_equivalence,
}


@dataclass
class Counterexample:
    prop: str
    instance: int
    pfps: Pfps
    details: list


@dataclass
class FuzzReport:
    instances: int = 0
    checks: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def fuzz(
    processes: int,
    instances: int,
    seed: int,
    properties: Optional[list] = None,
    on_counterexample: Optional[Callable[[Counterexample], None]] = None,
) -> FuzzReport:
    """Check ``properties`` (default: all) on ``instances`` random instances
    with between 2 and ``processes`` processes."""
    names = list(PROPERTIES) if properties is None else list(properties)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise ValueError(f"unknown properties {unknown}; choose from {sorted(PROPERTIES)}")
    report = FuzzReport(checks={n: 0 for n in names})
    for k in range(instances):
        rng = instance_rng(seed, k)
        f = random_pfps(rng.randint(2, max(2, processes)), rng)
        inst = Instance(k, rng, f, LeagueAnalyzer(f))
        report.instances += 1
        for name in names:
            details = PROPERTIES[name](inst)
            report.checks[name] += 1
            if details:
                cx = Counterexample(name, k, f, details)
                report.counterexamples.append(cx)
                if on_counterexample:
                    on_counterexample(cx)
    return report

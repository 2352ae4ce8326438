"""Embeddings of classic, asymmetric, FBAS and PBQS trust models into
permissionless fail-prone systems, with the corresponding condition checkers
and equivalence harnesses.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Optional

from .league import LeagueAnalyzer
from .model import (
    ConfigError,
    ContractError,
    Pfps,
    View,
    contains_quorum,
    fmt_set,
    is_quorum,
    max_closed_subset,
    normalize_config,
    quorums,
    set_key,
    sort_family,
    subsets,
    worst_case_view,
)


def _antichain(universe: frozenset, family: Iterable[Iterable[str]]) -> frozenset:
    clipped = {frozenset(f) & universe for f in family} or {frozenset()}
    return frozenset(f for f in clipped if not any(f < g for g in clipped))


@dataclass(frozen=True)
class SymmetricSystem:
    universe: frozenset
    fail_prone: frozenset

    @classmethod
    def make(cls, universe: Iterable[str], fail_prone: Iterable[Iterable[str]]) -> "SymmetricSystem":
        universe = frozenset(universe)
        if not universe:
            raise ConfigError("universe must be non-empty")
        return cls(universe, _antichain(universe, fail_prone))

    def canonical_quorums(self) -> list:
        return sort_family(self.universe - f for f in self.fail_prone)


@dataclass(frozen=True)
class AsymmetricSystem:
    universe: frozenset
    systems: Mapping

    @classmethod
    def make(cls, universe: Iterable[str], systems: Mapping) -> "AsymmetricSystem":
        universe = frozenset(universe)
        if set(systems) != set(universe):
            raise ConfigError("asymmetric system needs exactly one fail-prone system per process")
        return cls(universe, {p: _antichain(universe, fs) for p, fs in sorted(systems.items())})

    def contains_down(self, p: str, s: frozenset) -> bool:
        """``s ∈ F'*_p``: ``s`` is a subset of some fail-prone set of ``p``."""
        return any(s <= f for f in self.systems[p])


@dataclass(frozen=True)
class FbasSystem:
    universe: frozenset
    known: Mapping
    slices: Mapping

    @classmethod
    def make(cls, known: Mapping, slices: Mapping) -> "FbasSystem":
        if set(known) != set(slices):
            raise ConfigError("every FBAS process needs both a known set and slices")
        for p in sorted(slices):
            kp = frozenset(known[p])
            if not slices[p]:
                raise ConfigError(f"{p} declares no slices")
            for s in slices[p]:
                s = frozenset(s)
                if p not in s:
                    raise ConfigError(f"slice {fmt_set(s)} of {p} does not contain {p}")
                if not s <= kp:
                    raise ConfigError(f"slice {fmt_set(s)} of {p} is not inside its known set {fmt_set(kp)}")
        return cls(
            frozenset(known),
            {p: frozenset(known[p]) for p in sorted(known)},
            {p: frozenset(frozenset(s) for s in slices[p]) for p in sorted(slices)},
        )


@dataclass(frozen=True)
class PbqsSystem:
    universe: frozenset
    quorums: Mapping

    @classmethod
    def make(cls, quorums_of: Mapping) -> "PbqsSystem":
        fams = {p: frozenset(frozenset(q) for q in qs) for p, qs in sorted(quorums_of.items())}
        universe = frozenset(fams)
        for p, fam in fams.items():
            for q in fam:
                if not q:
                    raise ConfigError(f"{p} has an empty quorum")
                if not q <= universe:
                    raise ConfigError(f"quorum {fmt_set(q)} of {p} mentions unknown processes")
                for j in q:
                    if not any(qj <= q for qj in fams[j]):
                        raise ConfigError(f"quorum {fmt_set(q)} of {p} holds no quorum of its member {j}")
        return cls(universe, fams)


# --- classic -------------------------------------------------------------------


def q3_check(s: SymmetricSystem) -> tuple:
    """``(holds, witness)``: no three fail-prone sets (with repetition) cover the universe."""
    fam = sort_family(s.fail_prone)
    for triple in itertools.combinations_with_replacement(fam, 3):
        if triple[0] | triple[1] | triple[2] >= s.universe:
            return False, triple
    return True, None


def f_embed(s: SymmetricSystem) -> Pfps:
    return Pfps({p: normalize_config(s.universe, s.fail_prone) for p in s.universe})


@dataclass(frozen=True)
class EquivalenceResult:
    condition: bool
    league: bool
    witness: Optional[tuple] = None

    @property
    def agree(self) -> bool:
        return self.condition == self.league


def q3_equivalence_harness(s: SymmetricSystem, capacity: Optional[int] = None) -> EquivalenceResult:
    q3, witness = q3_check(s)
    report = LeagueAnalyzer(f_embed(s), capacity).is_league(s.universe)
    return EquivalenceResult(q3, report.is_league, witness)


# --- asymmetric ----------------------------------------------------------------


def b3_check(a: AsymmetricSystem) -> tuple:
    """``(holds, witness)`` with witness ``(p_i, p_j, F_i, F_j, F_ij)``.

    For fixed ``F_i, F_j`` the least covering ``F_ij`` is the uncovered
    remainder itself, so it is the reported one.
    """
    procs = sorted(a.universe)
    for i in procs:
        for j in procs:
            for fi in sort_family(a.systems[i]):
                for fj in sort_family(a.systems[j]):
                    rest = a.universe - fi - fj
                    if a.contains_down(i, rest) and a.contains_down(j, rest):
                        return False, (i, j, fi, fj, rest)
    return True, None


def g_embed(a: AsymmetricSystem) -> Pfps:
    return Pfps({p: normalize_config(a.universe, a.systems[p]) for p in a.universe})


@dataclass(frozen=True)
class GuildReport:
    wise: frozenset
    naive: frozenset
    guild: frozenset


def guild_and_wise(a: AsymmetricSystem, actual_faulty: Iterable[str]) -> GuildReport:
    """Wise and naive correct processes, and the maximal guild for the execution."""
    faulty = frozenset(actual_faulty)
    correct = a.universe - faulty
    wise = frozenset(p for p in correct if a.contains_down(p, faulty))
    guild = set(wise)
    changed = True
    while changed:
        changed = False
        for p in sorted(guild):
            if not any(a.universe - f <= guild for f in a.systems[p]):
                guild.discard(p)
                changed = True
    return GuildReport(wise, correct - wise, frozenset(guild))


@dataclass(frozen=True)
class B3LeagueResult:
    b3: bool
    tolerates_some: bool
    league: bool
    league_guild_function: bool

    @property
    def implication_holds(self) -> bool:
        return not (self.b3 and self.tolerates_some) or self.league


def guild_quorum_function_league(a: AsymmetricSystem, capacity: Optional[int] = None) -> bool:
    """League check for the universe under the quorum function that gives
    guild members ``{G, Π}`` and everyone else ``{Π}``, one guild per tolerated T."""
    analyzer = LeagueAnalyzer(g_embed(a), capacity)
    u = a.universe
    for t in analyzer.tolerated_sets(u):
        g = guild_and_wise(a, t).guild
        fams = {p: ([g, u] if p in g else [u]) for p in sorted(u - t)}
        for pi, pj in itertools.combinations_with_replacement(sorted(fams), 2):
            for qi in fams[pi]:
                for qj in fams[pj]:
                    if not (qi & qj) - t:
                        return False
        if not all(any(q <= u - t for q in fam) for fam in fams.values()):
            return False
    return True


def b3_league_harness(a: AsymmetricSystem, capacity: Optional[int] = None) -> B3LeagueResult:
    b3, _ = b3_check(a)
    analyzer = LeagueAnalyzer(g_embed(a), capacity)
    tolerates_some = bool(analyzer.tolerated_sets(a.universe))
    league = analyzer.is_league(a.universe).is_league
    return B3LeagueResult(b3, tolerates_some, league, guild_quorum_function_league(a, capacity))


# --- FBAS ------------------------------------------------------------------------


def fbas_derive(fb: FbasSystem) -> Pfps:
    """Federated fail-prone system: ``P_i ∖ S`` for every slice ``S``."""
    unknown = set().union(*fb.known.values()) - fb.universe
    if unknown:
        raise ConfigError(f"known sets mention processes without slices: {sorted(unknown)}")
    return Pfps({p: normalize_config(fb.known[p], [fb.known[p] - s for s in fb.slices[p]]) for p in fb.universe})


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: Optional[tuple] = None
    note: str = ""


def _require_correct(s: frozenset, faulty: frozenset, what: str) -> None:
    if s & faulty:
        raise ContractError(f"{what} {fmt_set(s)} contains faulty processes {fmt_set(s & faulty)}")


def intact_check(i: Iterable[str], f: Pfps, actual_faulty: Iterable[str]) -> CheckResult:
    """Quorums of members meet inside ``i``, and ``i`` is a quorum for each member."""
    i, faulty = frozenset(i), frozenset(actual_faulty)
    _require_correct(i, faulty, "intact candidate")
    if not i:
        return CheckResult(True, None, "degenerate: empty set")
    fams = {p: quorums(p, f) for p in sorted(i)}
    for pi, pj in itertools.combinations_with_replacement(sorted(i), 2):
        for qi in fams[pi]:
            for qj in fams[pj]:
                if not qi & qj & i:
                    return CheckResult(False, ("intersection", pi, pj, qi, qj))
    for p in sorted(i):
        if not is_quorum(i, p, f):
            return CheckResult(False, ("availability", p))
    return CheckResult(True)


def consensus_cluster_check(
    c: Iterable[str], f: Pfps, actual_faulty: Iterable[str], view: Optional[View] = None
) -> CheckResult:
    """Quorum pairs of members meet outside the faulty set, and each member
    has a quorum inside ``c``.  Quorums come from ``view`` (default: full knowledge)."""
    c, faulty = frozenset(c), frozenset(actual_faulty)
    _require_correct(c, faulty, "cluster candidate")
    v = f if view is None else view
    fams = {p: quorums(p, v) for p in sorted(c)}
    for pi, pj in itertools.combinations_with_replacement(sorted(c), 2):
        for qi in fams[pi]:
            for qj in fams[pj]:
                if not (qi & qj) - faulty:
                    return CheckResult(False, ("intersection", pi, pj, qi, qj))
    for p in sorted(c):
        if not contains_quorum(c, p, v):
            return CheckResult(False, ("availability", p))
    return CheckResult(True)


def pbqs_quorum_check(q: Iterable[str], p: str, f: Pfps, view: Optional[View] = None) -> bool:
    """Every member of ``q`` has a Def-8 quorum inside ``q``; members with
    unknown configuration impose nothing."""
    q = frozenset(q)
    v = f if view is None else view
    if not q:
        return False
    return all(v[j] is None or contains_quorum(q, j, v) for j in q)


def pbqs_cluster_check(system: PbqsSystem, c: Iterable[str], actual_faulty: Iterable[str]) -> CheckResult:
    """Consensus-cluster check against an explicit PBQS quorum system."""
    c, faulty = frozenset(c), frozenset(actual_faulty)
    _require_correct(c, faulty, "cluster candidate")
    for pi, pj in itertools.combinations_with_replacement(sorted(c), 2):
        for qi in sort_family(system.quorums[pi]):
            for qj in sort_family(system.quorums[pj]):
                if not (qi & qj) - faulty:
                    return CheckResult(False, ("intersection", pi, pj, qi, qj))
    for p in sorted(c):
        if not any(q <= c for q in system.quorums[p]):
            return CheckResult(False, ("availability", p))
    return CheckResult(True)


def strong_consistency(l: Iterable[str], f: Pfps, capacity: Optional[int] = None) -> CheckResult:
    """League consistency strengthened to intersect inside ``l`` itself."""
    l = frozenset(l)
    analyzer = LeagueAnalyzer(f, capacity)
    for t in analyzer.tolerated_sets(l):
        roots = sorted(l - t)
        fams = {r: analyzer.inclusive_rooted_minimal(r, t).sets for r in roots}
        for pi, pj in itertools.combinations_with_replacement(roots, 2):
            for si in fams[pi]:
                for sj in fams[pj]:
                    if not (si & sj & l) - t:
                        return CheckResult(False, (t, pi, pj, si, sj))
    return CheckResult(True)


def cluster_harness(f: Pfps, capacity: Optional[int] = None) -> list:
    """For every league L and tolerated T, check ``L ∖ T`` is a consensus
    cluster under both the full view and the worst-case view.  Returns failures."""
    analyzer = LeagueAnalyzer(f, capacity)
    failures = []
    for l in subsets(f.universe):
        if not l or not analyzer.is_league(l).is_league:
            continue
        for t in analyzer.tolerated_sets(l):
            for v in (f, worst_case_view(f, t)):
                res = consensus_cluster_check(l - t, f, t, v)
                if not res.ok:
                    failures.append((l, t, res.witness))
    return sorted(failures, key=lambda x: (set_key(x[0]), set_key(x[1])))


def survivors_of_execution(f: Pfps, actual_faulty: Iterable[str]) -> frozenset:
    """Correct processes whose assumptions hold when ``actual_faulty`` fails."""
    faulty = frozenset(actual_faulty)
    inside = max_closed_subset(f.universe - faulty, f)
    return frozenset(p for p in f.universe - faulty if any(x <= inside for x in f.config(p).slices))

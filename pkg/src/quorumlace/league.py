"""League analysis: tolerated sets, inclusive/rooted sets, and the view-free
consistency and availability checks.

All searches are exhaustive over subsets of the universe, so a capacity bound
applies (default 20 processes, overridable with ``QUORUMLACE_CAPACITY``).
"""

from __future__ import annotations

import os
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Optional

from .model import (
    CapacityError,
    ContractError,
    Pfps,
    closed_extensions,
    fmt_set,
    max_closed_subset,
    set_key,
    subsets,
)

DEFAULT_CAPACITY = 20


def capacity_bound() -> int:
    raw = os.environ.get("QUORUMLACE_CAPACITY")
    if raw is None:
        return DEFAULT_CAPACITY
    try:
        return int(raw)
    except ValueError as exc:
        raise CapacityError(f"QUORUMLACE_CAPACITY must be an integer, got {raw!r}") from exc


def _meets_outside(a: frozenset, b: frozenset, t: frozenset) -> bool:
    return bool((a & b) - t)


@dataclass(frozen=True)
class InclusiveRootedFamily:
    t: frozenset
    root: str
    sets: tuple


@dataclass(frozen=True)
class ConsistencyWitness:
    t: frozenset
    root_i: str
    root_j: str
    set_i: frozenset
    set_j: frozenset

    def describe(self) -> str:
        return (
            f"T={fmt_set(self.t)}: I={fmt_set(self.set_i)} rooted at {self.root_i}, "
            f"I'={fmt_set(self.set_j)} rooted at {self.root_j} meet only inside T"
        )


@dataclass(frozen=True)
class AvailabilityWitness:
    t: frozenset
    process: str

    def describe(self) -> str:
        return f"T={fmt_set(self.t)}: {self.process} has no survivor set inside L∖T"


@dataclass(frozen=True)
class LeagueReport:
    candidate: frozenset
    tolerated: tuple
    consistent: bool
    available: bool
    consistency_witness: Optional[ConsistencyWitness] = None
    availability_witness: Optional[AvailabilityWitness] = None

    @property
    def is_league(self) -> bool:
        return self.consistent and self.available


@dataclass(frozen=True)
class UnionResult:
    hypothesis_holds: bool
    union: Optional[LeagueReport] = None

    @property
    def holds(self) -> bool:
        return not self.hypothesis_holds or (self.union is not None and self.union.is_league)


@dataclass
class LeagueAnalyzer:
    """Caches per-T tolerance and inclusive-rooted families for one Pfps.

    ``tolerators(T)`` is the set of processes that tolerate ``T``; ``L``
    tolerates ``T`` exactly when ``L ∖ T`` is inside it.
    """

    pfps: Pfps
    capacity: Optional[int] = None
    _tolerators: dict = field(default_factory=dict, repr=False)
    _inclusive: dict = field(default_factory=dict, repr=False)
    _all_t: Optional[list] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        bound = capacity_bound() if self.capacity is None else self.capacity
        n = len(self.pfps.universe)
        if n > bound:
            raise CapacityError(
                f"universe has {n} processes, exhaustive bound is {bound}; "
                "raise QUORUMLACE_CAPACITY or analyze a sampled sub-instance"
            )

    @property
    def universe(self) -> frozenset:
        return self.pfps.universe

    def all_sets(self) -> list:
        if self._all_t is None:
            self._all_t = list(subsets(self.universe))
        return self._all_t

    def tolerators(self, t: frozenset) -> frozenset:
        got = self._tolerators.get(t)
        if got is None:
            survivors = max_closed_subset(self.universe - t, self.pfps)
            got = frozenset(
                p for p in self.universe if any(x <= survivors for x in self.pfps.config(p).slices)
            )
            self._tolerators[t] = got
        return got

    def tolerated_sets(self, l: Iterable[str], include_vacuous: bool = False) -> list:
        """Sets ``T`` tolerated by ``l``.  Sets covering ``l`` are tolerated
        vacuously and only listed with ``include_vacuous``."""
        l = frozenset(l)
        out = []
        for t in self.all_sets():
            rest = l - t
            if not rest:
                if include_vacuous:
                    out.append(t)
                continue
            if rest <= self.tolerators(t):
                out.append(t)
        return out

    def inclusive_rooted_minimal(self, root: str, t: Iterable[str]) -> InclusiveRootedFamily:
        t = frozenset(t)
        key = (root, t)
        sets = self._inclusive.get(key)
        if sets is None:
            sets = tuple(closed_extensions(self.pfps.config(root).slices, self.pfps, exempt=t))
            self._inclusive[key] = sets
        return InclusiveRootedFamily(t, root, sets)

    def check_consistency(self, l: Iterable[str], tolerated: Optional[list] = None) -> tuple:
        """``(verdict, witness)``.  Minimal inclusive-rooted sets suffice: a
        witness pair on supersets would also be a witness on the minimal sets below."""
        l = frozenset(l)
        tolerated = self.tolerated_sets(l) if tolerated is None else tolerated
        for t in tolerated:
            roots = sorted(l - t)
            fams = {r: self.inclusive_rooted_minimal(r, t).sets for r in roots}
            for i, pi in enumerate(roots):
                for pj in roots[i:]:
                    for si in fams[pi]:
                        for sj in fams[pj]:
                            if not _meets_outside(si, sj, t):
                                return False, ConsistencyWitness(t, pi, pj, si, sj)
        return True, None

    def check_availability(self, l: Iterable[str], tolerated: Optional[list] = None) -> tuple:
        l = frozenset(l)
        tolerated = self.tolerated_sets(l) if tolerated is None else tolerated
        for t in tolerated:
            inside = max_closed_subset(l - t, self.pfps)
            for p in sorted(l - t):
                if not any(x <= inside for x in self.pfps.config(p).slices):
                    return False, AvailabilityWitness(t, p)
        return True, None

    def is_league(self, l: Iterable[str]) -> LeagueReport:
        l = frozenset(l)
        tolerated = self.tolerated_sets(l)
        consistent, cw = self.check_consistency(l, tolerated)
        available, aw = self.check_availability(l, tolerated)
        return LeagueReport(l, tuple(tolerated), consistent, available, cw, aw)

    def union_preserves_league(self, l1: Iterable[str], l2: Iterable[str]) -> UnionResult:
        l1, l2 = frozenset(l1), frozenset(l2)
        for l in (l1, l2):
            if not self.is_league(l).is_league:
                raise ContractError(f"{fmt_set(l)} is not a league")
        union = l1 | l2
        common = l1 & l2
        hypothesis = bool(common) and all(common - t for t in self.tolerated_sets(union))
        if not hypothesis:
            return UnionResult(False)
        return UnionResult(True, self.is_league(union))

    def find_maximal_leagues(self) -> list:
        found: list = []
        members = sorted(self.universe)
        for size in range(len(members), 0, -1):
            for l in (s for s in self.all_sets() if len(s) == size):
                if any(l <= g for g in found):
                    continue
                if self.is_league(l).is_league:
                    found.append(l)
        if not found:
            return [frozenset()]
        return sorted(found, key=set_key)


def tolerated_sets(l: Iterable[str], f: Pfps, include_vacuous: bool = False) -> list:
    return LeagueAnalyzer(f).tolerated_sets(l, include_vacuous)


def inclusive_rooted_minimal(root: str, t: Iterable[str], f: Pfps) -> InclusiveRootedFamily:
    if root not in f.universe:
        raise ContractError(f"{root} is not in the universe")
    return LeagueAnalyzer(f).inclusive_rooted_minimal(root, t)


def check_consistency(l: Iterable[str], f: Pfps) -> tuple:
    return LeagueAnalyzer(f).check_consistency(l)


def check_availability(l: Iterable[str], f: Pfps) -> tuple:
    return LeagueAnalyzer(f).check_availability(l)


def is_league(l: Iterable[str], f: Pfps) -> LeagueReport:
    return LeagueAnalyzer(f).is_league(l)


def union_preserves_league(l1: Iterable[str], l2: Iterable[str], f: Pfps) -> UnionResult:
    return LeagueAnalyzer(f).union_preserves_league(l1, l2)


def find_maximal_leagues(f: Pfps) -> list:
    return LeagueAnalyzer(f).find_maximal_leagues()

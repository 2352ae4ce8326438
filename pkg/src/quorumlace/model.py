"""Permissionless fail-prone systems: configurations, slices, survivor sets,
tolerance, views and the quorum function, plus blocking sets.

Process sets are plain ``frozenset`` objects of string process ids.  Every
enumeration is produced in canonical order (size first, then the sorted id
tuple) so that results and counterexamples are reproducible.
"""

from __future__ import annotations

import itertools
import warnings
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Protocol, Union

ProcessId = str
ProcessSet = frozenset


class QuorumlaceError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(QuorumlaceError, ValueError):
    """Rejected input: malformed configuration or model description."""


class ContractError(QuorumlaceError):
    """A precondition of an operation was violated by the caller."""


class CapacityError(QuorumlaceError):
    """Exhaustive search requested over a universe larger than the bound."""


class DegenerateConfigurationWarning(UserWarning):
    """A configuration has an empty slice (some fail-prone set equals the trusted set)."""


def pset(*ids: Union[str, Iterable[str]]) -> frozenset:
    """Build a process set: ``pset("p1", "p2")`` or ``pset(["p1", "p2"])``."""
    if len(ids) == 1 and not isinstance(ids[0], str):
        return frozenset(ids[0])
    return frozenset(ids)


def set_key(s: Iterable[str]) -> tuple:
    items = tuple(sorted(s))
    return (len(items), items)


def sort_family(family: Iterable[frozenset]) -> list:
    return sorted(set(family), key=set_key)


def minimal_family(family: Iterable[frozenset]) -> list:
    """Inclusion-minimal members of ``family``, canonically ordered."""
    kept: list = []
    for s in sort_family(family):
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def subsets(universe: Iterable[str]) -> Iterator[frozenset]:
    """All subsets of ``universe`` in canonical order (size, then lexicographic)."""
    members = sorted(universe)
    for size in range(len(members) + 1):
        for combo in itertools.combinations(members, size):
            yield frozenset(combo)


def fmt_set(s: Iterable[str]) -> str:
    return "{" + ",".join(sorted(s)) + "}"


@dataclass(frozen=True)
class Configuration:
    """A process's trusted set together with its fail-prone system over it."""

    trusted: frozenset
    fail_prone: frozenset

    @cached_property
    def slices(self) -> tuple:
        return tuple(sort_family(self.trusted - f for f in self.fail_prone))

    @property
    def is_degenerate(self) -> bool:
        # the canonical empty configuration is the worst-case advertisement, not a defect
        return bool(self.trusted) and any(not s for s in self.slices)

    def __repr__(self) -> str:
        fps = ",".join(fmt_set(f) for f in sort_family(self.fail_prone))
        return f"Configuration({fmt_set(self.trusted)}, {{{fps}}})"


EMPTY_CONFIG = Configuration(frozenset(), frozenset({frozenset()}))


def normalize_config(raw_trusted: Iterable[str], raw_fail_prone: Iterable[Iterable[str]]) -> Configuration:
    """Intersect fail-prone sets with the trusted set and reduce them to an antichain.

    An empty fail-prone collection means the process assumes no failures
    among its trusted set and becomes ``{∅}``.
    """
    trusted = frozenset(raw_trusted)
    if not trusted:
        raise ConfigError("trusted set must be non-empty")
    clipped = {frozenset(f) & trusted for f in raw_fail_prone}
    if not clipped:
        clipped = {frozenset()}
    maximal = [f for f in clipped if not any(f < g for g in clipped)]
    config = Configuration(trusted, frozenset(maximal))
    if config.is_degenerate:
        warnings.warn(
            f"configuration {config!r} has an empty slice; the process relies on nobody",
            DegenerateConfigurationWarning,
            stacklevel=2,
        )
    return config


class Assumptions(Protocol):
    """Anything that can report the slices of a process, or ``None`` when unknown."""

    universe: frozenset

    def slices_of(self, p: str) -> Optional[tuple]: ...


class View(Mapping):
    """Partial assignment of configurations; ``None`` stands for ⊥."""

    def __init__(self, entries: Mapping, universe: Optional[Iterable[str]] = None):
        universe = frozenset(entries) if universe is None else frozenset(universe)
        unknown = set(entries) - universe
        if unknown:
            raise ConfigError(f"view entries outside the universe: {sorted(unknown)}")
        self.universe = universe
        self._entries = {p: entries.get(p) for p in sorted(universe)}

    def __getitem__(self, p: str) -> Optional[Configuration]:
        return self._entries[p]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, View):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {c!r}" if c is not None else f"{p}: ⊥" for p, c in self._entries.items())
        return f"{type(self).__name__}({body})"

    @property
    def domain(self) -> frozenset:
        return frozenset(p for p, c in self._entries.items() if c is not None)

    def slices_of(self, p: str) -> Optional[tuple]:
        c = self._entries[p]
        return None if c is None else c.slices

    def updated(self, changes: Mapping) -> "View":
        merged = dict(self._entries)
        merged.update(changes)
        return View(merged, self.universe)


class Pfps(View):
    """A permissionless fail-prone system: a total view over its universe."""

    def __init__(self, entries: Mapping):
        super().__init__(entries)
        if not self.universe:
            raise ConfigError("universe must be non-empty")
        missing = [p for p, c in self._entries.items() if c is None]
        if missing:
            raise ConfigError(f"processes without configuration: {missing}")
        for p, c in self._entries.items():
            outside = c.trusted - self.universe
            if outside:
                raise ConfigError(f"{p} trusts unconfigured processes {sorted(outside)}")

    @classmethod
    def from_raw(cls, raw: Mapping) -> "Pfps":
        """Build from ``{pid: (trusted, fail_prone)}`` with normalization."""
        return cls({p: normalize_config(t, fp) for p, (t, fp) in raw.items()})

    def config(self, p: str) -> Configuration:
        return self._entries[p]


def slices_of(p: str, c: Configuration) -> list:
    """Slices ``P_i ∖ F`` of ``p`` for every fail-prone set ``F``."""
    if c.is_degenerate:
        warnings.warn(f"{p} has an empty slice", DegenerateConfigurationWarning, stacklevel=2)
    return list(c.slices)


def has_slice_in(p: str, s: Iterable[str], c: Configuration) -> bool:
    s = frozenset(s)
    return any(x <= s for x in c.slices)


def max_closed_subset(s: Iterable[str], assumptions: Assumptions, exempt: Iterable[str] = frozenset()) -> frozenset:
    """Greatest ``M ⊆ s`` in which every non-exempt member with known
    configuration has a slice inside ``M``.  Computed by deleting violators
    until a fixpoint is reached.
    """
    m = set(s)
    exempt = frozenset(exempt)
    changed = True
    while changed:
        changed = False
        for p in sorted(m):
            if p in exempt:
                continue
            sl = assumptions.slices_of(p)
            if sl is None:
                continue
            if not any(x <= m for x in sl):
                m.discard(p)
                changed = True
    return frozenset(m)


def _lacking_member(cur: frozenset, assumptions: Assumptions, exempt: frozenset):
    for q in sorted(cur - exempt):
        sl = assumptions.slices_of(q)
        if sl is not None and not any(x <= cur for x in sl):
            return sl
    return None


def closed_extensions(seeds: Iterable[frozenset], assumptions: Assumptions, exempt: Iterable[str] = frozenset()) -> list:
    """Inclusion-minimal sets that contain one of ``seeds`` and in which every
    non-exempt member with known configuration has a slice.

    Branches over the slices of the first member lacking one.  Every set with
    those two properties contains one of the returned sets.
    """
    exempt = frozenset(exempt)
    found: list = []
    seen: set = set()
    stack = sorted({frozenset(s) for s in seeds}, key=set_key, reverse=True)
    while stack:
        cur = stack.pop()
        if cur in seen:
            continue
        seen.add(cur)
        if any(r <= cur for r in found):
            continue
        lacking = _lacking_member(cur, assumptions, exempt)
        if lacking is None:
            found.append(cur)
            continue
        for x in sorted(lacking, key=set_key, reverse=True):
            stack.append(cur | x)
    return minimal_family(found)


def _union_closure(bases: Iterable[frozenset], atoms: Iterable[frozenset]) -> list:
    atoms = sort_family(atoms)
    family = set(bases)
    frontier = list(family)
    while frontier:
        nxt = []
        for s in frontier:
            for a in atoms:
                u = s | a
                if u not in family:
                    family.add(u)
                    nxt.append(u)
        frontier = nxt
    return sort_family(family)


def _all_closed_rooted(root_slices: tuple, assumptions: Assumptions, exempt: frozenset = frozenset()) -> list:
    # closed sets are closed under union; each one is a minimal rooted set plus
    # minimal closed sets around its remaining members
    minimal = closed_extensions(root_slices, assumptions, exempt)
    atoms = set()
    for x in sorted(assumptions.universe):
        atoms.update(closed_extensions([frozenset({x})], assumptions, exempt))
    return _union_closure(minimal, atoms)


def survivor_sets(p: str, f: Pfps, include_all: bool = False) -> list:
    """Survivor sets of ``p``: sets containing a slice of ``p`` in which
    every member has a slice.  Minimal ones by default; ``include_all``
    returns every such set.
    """
    root = f.config(p).slices
    if include_all:
        return _all_closed_rooted(root, f)
    return closed_extensions(root, f)


def tolerates(p: str, f: Pfps, a: Iterable[str]) -> bool:
    """Whether the assumptions of ``p`` hold when exactly ``a`` fails."""
    survivors = max_closed_subset(f.universe - frozenset(a), f)
    return any(x <= survivors for x in f.config(p).slices)


def tolerated_by(l: Iterable[str], f: Pfps, a: Iterable[str]) -> bool:
    a = frozenset(a)
    rest = frozenset(l) - a
    if not rest:
        return True
    survivors = max_closed_subset(f.universe - a, f)
    return all(any(x <= survivors for x in f.config(p).slices) for p in rest)


def _own_slices(p: str, v: View) -> tuple:
    if p not in v.universe or v[p] is None:
        raise ContractError(f"view has no configuration for the evaluating process {p}")
    return v[p].slices


def is_quorum(q: Iterable[str], p: str, v: View) -> bool:
    """Def-8 quorum test: ``q`` holds a slice of ``p`` and a slice of every
    member whose configuration is known in ``v``."""
    q = frozenset(q)
    own = _own_slices(p, v)
    if not any(x <= q for x in own):
        return False
    for j in q:
        sl = v.slices_of(j)
        if sl is not None and not any(x <= q for x in sl):
            return False
    return True


def contains_quorum(s: Iterable[str], p: str, v: View) -> bool:
    """Whether some quorum for ``p`` in ``v`` is a subset of ``s``."""
    own = _own_slices(p, v)
    m = max_closed_subset(s, v)
    return any(x <= m for x in own)


def quorums(p: str, v: View, minimal_only: bool = True) -> list:
    own = _own_slices(p, v)
    if minimal_only:
        return closed_extensions(own, v)
    return _all_closed_rooted(own, v)


def worst_case_view(f: Pfps, t: Iterable[str]) -> View:
    """Every member of ``t`` advertises the empty configuration ``(∅, {∅})``."""
    t = frozenset(t)
    return View({p: (EMPTY_CONFIG if p in t else f.config(p)) for p in f.universe}, f.universe)


def is_resilient(v: View, f: Pfps, t: Iterable[str]) -> bool:
    t = frozenset(t)
    return all(v[i] is None or v[i] == f.config(i) for i in v.universe if i not in t)


def blocks(b: Iterable[str], p: str, c: Configuration) -> bool:
    """Whether ``b`` meets every slice of ``p``.

    An empty slice can never be met, so a degenerate process is never blocked.
    """
    b = frozenset(b)
    if c.is_degenerate:
        warnings.warn(f"{p} has an empty slice and cannot be blocked", DegenerateConfigurationWarning, stacklevel=2)
    return all(x & b for x in c.slices)


def blocked_closure(b: Iterable[str], f: Pfps) -> frozenset:
    """Least superset of ``b`` closed under adding processes it blocks."""
    cur = set(b)
    changed = True
    while changed:
        changed = False
        for p in sorted(f.universe - cur):
            if all(x & cur for x in f.config(p).slices):
                cur.add(p)
                changed = True
    return frozenset(cur)

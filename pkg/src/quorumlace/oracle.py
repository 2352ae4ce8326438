"""Subset-enumeration oracle.

Every function here evaluates a definition literally by enumerating all
subsets of the universe.  Nothing in this module calls the fixpoint or
branching algorithms of :mod:`quorumlace.model` or :mod:`quorumlace.league`;
it only reads raw configuration fields.  Use it on small universes (the CLI
bounds it at 6 processes by default).
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from typing import Optional

from .model import EMPTY_CONFIG, Configuration, Pfps, View

ORACLE_BOUND = 6


def _all_subsets(universe: Iterable[str]) -> list:
    members = sorted(universe)
    out = []
    for r in range(len(members) + 1):
        out.extend(frozenset(c) for c in itertools.combinations(members, r))
    return out


def _slice_list(c: Optional[Configuration]) -> Optional[list]:
    if c is None:
        return None
    return [c.trusted - f for f in c.fail_prone]


def _has_slice(c: Optional[Configuration], s: frozenset) -> bool:
    return any(x <= s for x in _slice_list(c))


def _minimal(family: Iterable[frozenset]) -> set:
    family = set(family)
    return {s for s in family if not any(o < s for o in family)}


# --- tolerance -------------------------------------------------------------


def _supports(f: Pfps, x: frozenset, a: frozenset) -> bool:
    # every member has F with A∩P ⊆ F and P∖F ⊆ X
    for q in x:
        c = f[q]
        if not any((a & c.trusted) <= fp and (c.trusted - fp) <= x for fp in c.fail_prone):
            return False
    return True


def satisfied_gfp(f: Pfps, a: Iterable[str]) -> frozenset:
    """Processes whose assumptions hold under the greatest-fixpoint reading:
    the union of all self-supporting sets."""
    a = frozenset(a)
    out: set = set()
    for x in _all_subsets(f.universe):
        if _supports(f, x, a):
            out |= x
    return frozenset(out)


def satisfied_lfp(f: Pfps, a: Iterable[str]) -> frozenset:
    """Processes whose assumptions hold under the least-fixpoint reading."""
    a = frozenset(a)
    cur: frozenset = frozenset()
    while True:
        nxt = frozenset(
            q
            for q in f.universe
            if any((a & f[q].trusted) <= fp and (f[q].trusted - fp) <= cur for fp in f[q].fail_prone)
        )
        if nxt == cur:
            return cur
        cur = nxt


def tolerated_by(l: Iterable[str], f: Pfps, a: Iterable[str]) -> bool:
    a = frozenset(a)
    sat = satisfied_gfp(f, a)
    return all(p in sat for p in frozenset(l) - a)


def tolerated_family(l: Iterable[str], f: Pfps, include_vacuous: bool = False) -> set:
    l = frozenset(l)
    return {t for t in _all_subsets(f.universe) if (include_vacuous or l - t) and tolerated_by(l, f, t)}


# --- survivor sets and quorums ---------------------------------------------


def closed_rooted(p: str, v: View) -> set:
    """All S where ``p`` has a slice and every member with known configuration has one."""
    out = set()
    for s in _all_subsets(v.universe):
        if not _has_slice(v[p], s):
            continue
        if all(v[j] is None or _has_slice(v[j], s) for j in s):
            out.add(s)
    return out


def survivor_sets(p: str, f: Pfps, include_all: bool = False) -> set:
    fam = closed_rooted(p, f)
    return fam if include_all else _minimal(fam)


def survivor_set_avoiding(p: str, f: Pfps, a: Iterable[str]) -> bool:
    a = frozenset(a)
    return any(not (s & a) for s in survivor_sets(p, f))


def is_quorum(q: Iterable[str], p: str, v: View) -> bool:
    q = frozenset(q)
    if not _has_slice(v[p], q):
        return False
    for j in q:
        c = v[j]
        if c is not None and not any((c.trusted - fp) <= q for fp in c.fail_prone):
            return False
    return True


def quorum_family(p: str, v: View) -> set:
    return {q for q in _all_subsets(v.universe) if is_quorum(q, p, v)}


def inclusive_rooted(root: str, t: Iterable[str], f: Pfps, minimal: bool = True) -> set:
    t = frozenset(t)
    fam = set()
    for s in _all_subsets(f.universe):
        if _has_slice(f[root], s) and all(_has_slice(f[q], s) for q in s - t):
            fam.add(s)
    return _minimal(fam) if minimal else fam


def blocked_closure(b: Iterable[str], f: Pfps) -> frozenset:
    """Intersection of every superset of ``b`` closed under the blocking rule."""
    b = frozenset(b)
    result = f.universe
    for x in _all_subsets(f.universe):
        if not b <= x:
            continue
        closed = all(q in x for q in f.universe if all(s & x for s in _slice_list(f[q])))
        if closed:
            result = result & x
    return result


# --- leagues, quantifying over views ----------------------------------------


def lie_options(universe: Iterable[str]) -> list:
    """Configurations a faulty process may advertise, up to their effect on
    quorum membership: ⊥, and every single-slice configuration.  A multi-slice
    advertisement admits exactly the union of the quorums its single slices admit.
    """
    opts: list = [None, EMPTY_CONFIG]
    for s in _all_subsets(universe):
        if s:
            opts.append(Configuration(s, frozenset({frozenset()})))
    return opts


def resilient_quorums(p: str, f: Pfps, t: Iterable[str], options: Optional[list] = None) -> set:
    """Every Q that is a quorum for ``p`` in some T-resilient view whose
    entries outside T are the true configurations.

    Entries of T-members are chosen independently from ``options``; a quorum
    only constrains its own members, so existence is checked member by member.
    """
    t = frozenset(t)
    options = lie_options(f.universe) if options is None else options
    out = set()
    for q in _all_subsets(f.universe):
        if not _has_slice(f[p], q):
            continue
        ok = True
        for j in q:
            if j in t:
                if not any(c is None or _has_slice(c, q) for c in options):
                    ok = False
                    break
            elif not _has_slice(f[j], q):
                ok = False
                break
        if ok:
            out.add(q)
    return out


def consistency(l: Iterable[str], f: Pfps) -> tuple:
    """``(verdict, witness)`` with witness ``(T, p_i, p_j, Q_i, Q_j)``."""
    l = frozenset(l)
    options = lie_options(f.universe)
    for t in sorted(tolerated_family(l, f), key=lambda s: (len(s), sorted(s))):
        roots = sorted(l - t)
        fams = {r: sorted(resilient_quorums(r, f, t, options), key=lambda s: (len(s), sorted(s))) for r in roots}
        for i, pi in enumerate(roots):
            for pj in roots[i:]:
                for qi in fams[pi]:
                    for qj in fams[pj]:
                        if not ((qi & qj) - t):
                            return False, (t, pi, pj, qi, qj)
    return True, None


def availability(l: Iterable[str], f: Pfps) -> tuple:
    l = frozenset(l)
    for t in sorted(tolerated_family(l, f), key=lambda s: (len(s), sorted(s))):
        for p in sorted(l - t):
            if not any(q <= l - t for q in quorum_family(p, f)):
                return False, (t, p)
    return True, None


def is_league(l: Iterable[str], f: Pfps) -> bool:
    return consistency(l, f)[0] and availability(l, f)[0]


# --- classic and asymmetric conditions -------------------------------------


def covers_three(universe: Iterable[str], family: Iterable[frozenset]) -> bool:
    universe = frozenset(universe)
    fam = list(family)
    return any((a | b | c) >= universe for a in fam for b in fam for c in fam)


def downward_closure(family: Iterable[frozenset]) -> set:
    out = set()
    for s in family:
        out.update(_all_subsets(s))
    return out


def b3_holds(universe: Iterable[str], systems: Mapping) -> bool:
    universe = frozenset(universe)
    closures = {p: downward_closure(fs) for p, fs in systems.items()}
    for i in systems:
        for j in systems:
            common = closures[i] & closures[j]
            for fi in systems[i]:
                for fj in systems[j]:
                    for fij in common:
                        if (fi | fj | fij) >= universe:
                            return False
    return True

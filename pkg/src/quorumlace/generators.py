"""Seeded random instance generators for fuzzing and sweeps."""

from __future__ import annotations

import itertools
import random
from typing import Optional

from .model import EMPTY_CONFIG, Configuration, Pfps, View, normalize_config


def process_ids(n: int) -> list:
    return [f"p{i}" for i in range(1, n + 1)]


def _random_subset(rng: random.Random, pool: list, lo: int, hi: int) -> frozenset:
    k = rng.randint(lo, max(lo, min(hi, len(pool))))
    return frozenset(rng.sample(pool, k))


def random_antichain(rng: random.Random, pool: list, max_sets: int = 3, max_size: Optional[int] = None) -> list:
    """Fail-prone sets over ``pool``, never the whole pool (no empty slices)."""
    if len(pool) <= 1:
        return [frozenset()]
    cap = len(pool) - 1 if max_size is None else min(max_size, len(pool) - 1)
    sets = [_random_subset(rng, pool, 0, cap) for _ in range(rng.randint(1, max_sets))]
    return sets


def random_config(rng: random.Random, owner: str, ids: list) -> Configuration:
    others = [p for p in ids if p != owner]
    trusted = set(_random_subset(rng, others, 0, len(others)))
    if rng.random() < 0.9 or not trusted:
        trusted.add(owner)
    pool = sorted(trusted)
    return normalize_config(trusted, random_antichain(rng, pool, max_size=max(1, len(pool) // 2)))


def random_pfps(n: int, rng: random.Random) -> Pfps:
    """Mixture of shapes: arbitrary trust, shared-universe thresholds, two
    overlapping communities, per-process fail-prone systems over the whole
    universe, and one classic system shared by everyone."""
    ids = process_ids(n)
    shape = rng.choice(["arbitrary", "threshold", "communities", "asymmetric", "symmetric"])
    configs = {}
    if shape == "arbitrary":
        for p in ids:
            configs[p] = random_config(rng, p, ids)
    elif shape == "threshold":
        for p in ids:
            k = rng.randint(0, max(0, (n - 1) // 3 + 1))
            fps = [frozenset(rng.sample(ids, k)) for _ in range(rng.randint(1, 3))]
            configs[p] = normalize_config(ids, fps)
    elif shape == "communities":
        cut = rng.randint(1, n - 1)
        left, right = ids[:cut + 1], ids[cut - 1:] if cut > 1 else ids[cut:]
        for p in ids:
            group = left if p in left and (p not in right or rng.random() < 0.5) else right
            pool = sorted(set(group) | {p})
            configs[p] = normalize_config(pool, random_antichain(rng, pool, max_size=max(1, len(pool) // 3)))
    elif shape == "asymmetric":
        for p in ids:
            configs[p] = normalize_config(ids, random_antichain(rng, ids, max_size=max(1, n // 2)))
    else:
        _, family = random_symmetric_family(n, rng)
        shared = normalize_config(ids, family)
        configs = {p: shared for p in ids}
    return Pfps(configs)


def random_symmetric_family(n: int, rng: random.Random) -> tuple:
    """``(universe, fail_prone)`` for a classic fail-prone system over n processes."""
    ids = process_ids(n)
    if rng.random() < 0.4:
        k = rng.randint(0, (n + 1) // 2)
        fam = [frozenset(c) for c in itertools.combinations(ids, k)]
    else:
        fam = [_random_subset(rng, ids, 0, max(1, n // 2)) for _ in range(rng.randint(1, 4))]
    return frozenset(ids), fam


def random_asymmetric(n: int, rng: random.Random) -> tuple:
    ids = process_ids(n)
    systems = {}
    for p in ids:
        others = [q for q in ids if q != p]
        fam = [_random_subset(rng, others, 0, max(1, (n - 1) // 2)) for _ in range(rng.randint(1, 3))]
        systems[p] = fam
    return frozenset(ids), systems


def random_resilient_view(f: Pfps, t: frozenset, rng: random.Random, options: Optional[list] = None) -> View:
    """A view that is truthful outside ``t``; members of ``t`` get ⊥, the
    empty configuration, or a random single-slice lie."""
    ids = sorted(f.universe)
    entries = {}
    for p in ids:
        if p not in t:
            entries[p] = f.config(p)
            continue
        roll = rng.random()
        if roll < 0.3:
            entries[p] = None
        elif roll < 0.6:
            entries[p] = EMPTY_CONFIG
        else:
            entries[p] = Configuration(_random_subset(rng, ids, 1, len(ids)), frozenset({frozenset()}))
    return View(entries, f.universe)


def random_partial_view(f: Pfps, rng: random.Random, keep: str) -> View:
    """Truthful view of ``f`` with random entries other than ``keep`` set to ⊥."""
    entries = {p: (f.config(p) if p == keep or rng.random() < 0.6 else None) for p in f.universe}
    return View(entries, f.universe)

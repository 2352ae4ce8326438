"""Run a scenario template over many seeds and faulty assignments."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

from ..model import ContractError, fmt_set, tolerated_by
from .checkers import PRECONDITION, check
from .engine import run
from .scenario import Honest, Scenario


@dataclass
class SweepReport:
    runs: int = 0
    truncated: int = 0
    violations: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: "SweepReport") -> "SweepReport":
        return SweepReport(
            self.runs + other.runs,
            self.truncated + other.truncated,
            sorted(self.violations + other.violations, key=repr),
            sorted(self.skipped + other.skipped, key=repr),
        )


def faulty_key(faulty: Mapping) -> frozenset:
    return frozenset(p for p, b in faulty.items() if not isinstance(b, Honest))


def sweep(
    template: Scenario,
    seeds: Iterable[int],
    faulty_maps: Iterable[Mapping],
    expected_untolerated: Iterable[Iterable[str]] = (),
) -> SweepReport:
    """Every combination of faulty assignment and seed.  Each violation is
    reported as ``(faulty assignment, seed, messages)`` for replay."""
    expected = {frozenset(s) for s in expected_untolerated}
    seeds = list(seeds)
    report = SweepReport()
    for faulty in faulty_maps:
        fs = faulty_key(faulty)
        if not tolerated_by(template.league, template.pfps, fs):
            if fs in expected:
                report.skipped.append((fmt_set(fs), "expected-untolerated"))
                continue
            raise ContractError(f"faulty set {fmt_set(fs)} is not tolerated and not marked expected-untolerated")
        for seed in seeds:
            sc = replace(template, faulty=dict(faulty), seed=seed)
            trace = run(sc)
            verdict = check(trace, sc)
            report.runs += 1
            report.truncated += trace.truncated
            if verdict.status == PRECONDITION:
                report.skipped.append((fmt_set(fs), verdict.note))
            elif not verdict.ok:
                report.violations.append((dict(faulty), seed, verdict.violations))
    return report

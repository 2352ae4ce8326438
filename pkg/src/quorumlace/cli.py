"""Command-line interface.

Exit codes: 0 when every requested check passes, 1 when a check fails or a
violation is found, 2 for usage and input errors, 3 when an instance exceeds
the exhaustive-search capacity.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path
from typing import Optional

from . import bridges, serialize
from .fuzz import PROPERTIES, fuzz
from .league import LeagueAnalyzer
from .model import (
    EMPTY_CONFIG,
    CapacityError,
    ConfigError,
    ContractError,
    Pfps,
    fmt_set,
    quorums,
    survivor_sets,
    tolerated_by,
)
from .oracle import ORACLE_BOUND
from .simnet import (
    BroadcastProtocol,
    Crash,
    Equivocate,
    LieConfig,
    Mute,
    Op,
    RegisterProtocol,
    Scenario,
    WorstCase,
    check,
    run,
)
from .simnet.checkers import PRECONDITION

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
SHOW_CHOICES = ("slices", "survivors", "quorums", "tolerated")


class UsageError(Exception):
    pass


def _ids(raw: str) -> frozenset:
    return frozenset(x.strip() for x in raw.split(",") if x.strip())


def _emit(args, doc: dict, text: list) -> None:
    if args.json:
        sys.stdout.write(serialize.dumps({"format": serialize.FORMAT, "command": args.command, **doc}))
    else:
        sys.stdout.write("\n".join(text) + "\n")


def _fam(fam) -> str:
    return "{" + ", ".join(fmt_set(s) for s in fam) + "}"


# --- analyze -----------------------------------------------------------------


def cmd_analyze(args) -> int:
    f, file_league = serialize.load_config(args.config)
    analyzer = LeagueAnalyzer(f, args.capacity)
    shows = [s for s in (args.show or "").split(",") if s]
    bad = [s for s in shows if s not in SHOW_CHOICES]
    if bad:
        raise UsageError(f"--show accepts {','.join(SHOW_CHOICES)}; got {','.join(bad)}")
    doc: dict = {}
    text: list = []
    for what in shows:
        per = {}
        for p in sorted(f.universe):
            if what == "slices":
                fam = list(f.config(p).slices)
            elif what == "survivors":
                fam = survivor_sets(p, f)
            elif what == "quorums":
                fam = quorums(p, f)
            else:
                continue
            per[p] = serialize.family(fam)
            text.append(f"{what} {p}: {_fam(fam)}")
        doc[what] = per
    league_arg = args.league if args.league is not None else (",".join(sorted(file_league)) if file_league else None)
    if "tolerated" in shows:
        target = f.universe if league_arg in (None, "all-maximal") else _ids(league_arg)
        tol = analyzer.tolerated_sets(target)
        doc["tolerated"] = {"by": serialize.ids(target), "sets": serialize.family(tol)}
        text.append(f"tolerated by {fmt_set(target)}: {_fam(tol)}")
    code = EXIT_OK
    if league_arg == "all-maximal":
        found = analyzer.find_maximal_leagues()
        doc["maximal_leagues"] = serialize.family(found)
        text.append(f"maximal leagues: {_fam(found)}")
    elif league_arg is not None:
        target = _ids(league_arg)
        unknown = target - f.universe
        if unknown:
            raise UsageError(f"--league mentions unknown processes {sorted(unknown)}")
        report = analyzer.is_league(target)
        doc["league"] = serialize.league_report_to_json(report)
        text.append(f"league {fmt_set(target)}: is_league={str(report.is_league).lower()}")
        text.append(f"  tolerated: {_fam(report.tolerated)}")
        text.append(f"  consistent={str(report.consistent).lower()} available={str(report.available).lower()}")
        for w in (report.consistency_witness, report.availability_witness):
            if w is not None:
                text.append(f"  witness: {w.describe()}")
        code = EXIT_OK if report.is_league else EXIT_FAIL
    _emit(args, doc, text)
    return code


# --- simulate ----------------------------------------------------------------


def parse_behavior(token: str, universe: list, value: str):
    name, _, arg = token.partition("@")
    if name in ("lie-empty", "lie"):
        return LieConfig(EMPTY_CONFIG)
    if name == "worst-case":
        return WorstCase()
    if name == "mute":
        return Mute()
    if name == "crash":
        try:
            return Crash(int(arg or 0))
        except ValueError as exc:
            raise UsageError(f"crash takes a step number, as in crash@12; got {token!r}") from exc
    if name == "equivocate":
        half = len(universe) // 2
        first, second = frozenset(universe[:half]), frozenset(universe[half:])
        return Equivocate((first, second), value, arg or value + "'")
    raise UsageError(f"unknown behavior {token!r}; use lie-empty, worst-case, mute, crash@N or equivocate[@other]")


def parse_faulty(spec: Optional[str], f: Pfps, value: str) -> dict:
    out: dict = {}
    universe = sorted(f.universe)
    for item in (spec or "").split(","):
        item = item.strip()
        if not item:
            continue
        p, sep, beh = item.partition(":")
        if not sep or p not in f.universe:
            raise UsageError(f"faulty entries look like p1:mute with p1 in the universe; got {item!r}")
        out[p] = parse_behavior(beh, universe, value)
    return out


def parse_script(spec: str, writer: str) -> tuple:
    """``w:a,r:p3,&r:p1``: each op waits for the previous one; a leading ``&``
    issues it alongside the previous op instead."""
    ops: list = []
    for i, item in enumerate(x.strip() for x in spec.split(",") if x.strip()):
        together = item.startswith("&")
        item = item.lstrip("&")
        kind, _, arg = item.partition(":")
        prev_after = ops[-1].after if ops else None
        after = prev_after if together else (i - 1 if i else None)
        if kind == "w":
            ops.append(Op(writer, "write", arg, after=after))
        elif kind == "r":
            ops.append(Op(arg, "read", after=after))
        else:
            raise UsageError(f"script items are w:<value> or r:<process>; got {item!r}")
    return tuple(ops)


def cmd_simulate(args) -> int:
    f, file_league = serialize.load_config(args.config)
    league = _ids(args.league) if args.league else (file_league or f.universe)
    universe = sorted(f.universe)
    if args.protocol == "broadcast":
        protocol = BroadcastProtocol(args.sender or universe[0], args.value)
    else:
        writer = args.writer or universe[0]
        others = sorted(league - {writer}) or [writer]
        protocol = RegisterProtocol(writer, parse_script(args.script or f"w:{args.value},r:{others[0]}", writer))
    faulty = parse_faulty(args.faulty, f, args.value)
    try:
        template = Scenario(
            f, league, protocol, faulty, seed=args.seed, max_steps=args.max_steps, adversarial_target=args.adversarial
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    tolerated = tolerated_by(league, f, template.faulty_set)
    text: list = []
    doc: dict = {"league": serialize.ids(league), "faulty": serialize.ids(template.faulty_set), "tolerated": tolerated}
    if not tolerated and not args.force:
        text.append(f"faulty set {fmt_set(template.faulty_set)} is not tolerated by {fmt_set(league)}; skipped (use --force)")
        doc["skipped"] = True
        _emit(args, doc, text)
        return EXIT_OK
    seeds = range(args.seed, args.seed + (args.sweep or 1))
    violations = []
    runs = truncated = 0
    for seed in seeds:
        sc = Scenario(f, league, protocol, faulty, seed=seed, max_steps=args.max_steps, adversarial_target=args.adversarial)
        trace = run(sc)
        verdict = check(trace, sc)
        runs += 1
        truncated += trace.truncated
        failed = verdict.status not in ("ok", PRECONDITION)
        if args.trace and (not args.sweep or failed):
            out = Path(args.trace)
            if args.sweep:
                out.mkdir(parents=True, exist_ok=True)
                out = out / f"trace-{seed}.jsonl"
            out.write_text(trace.to_jsonl(), encoding="utf-8")
        if failed:
            violations.append({"seed": seed, "violations": verdict.violations})
            text.append(f"seed {seed}: " + "; ".join(verdict.violations))
        if not args.sweep:
            doc["properties"] = verdict.properties
            doc["status"] = verdict.status
            text.append(f"seed {seed}: {verdict.status} " + " ".join(f"{k}={v}" for k, v in sorted(verdict.properties.items())))
            outputs = [(p, payload) for _, kind, p, payload in trace.records if kind == "output"]
            doc["outputs"] = [{"process": p, **payload} for p, payload in outputs]
            text.extend(f"  {p}: {payload}" for p, payload in outputs)
    doc.update(runs=runs, truncated=truncated, violations=violations)
    text.append(f"{runs} run(s), {len(violations)} with violations, {truncated} truncated")
    _emit(args, doc, text)
    return EXIT_FAIL if violations and tolerated else EXIT_OK


# --- compare -----------------------------------------------------------------

_CHECK_MODELS = {
    "q3": ("symmetric",),
    "thm1": ("symmetric",),
    "b3": ("asymmetric",),
    "thm2": ("asymmetric",),
    "guild": ("asymmetric",),
    "intact": ("fbas", "pfps"),
    "cluster": ("fbas", "pfps", "pbqs"),
}


def _model_kind(m) -> str:
    return serialize.model_to_json(m)["model"]


def _as_pfps(m) -> Pfps:
    return bridges.fbas_derive(m) if isinstance(m, bridges.FbasSystem) else m


def cmd_compare(args) -> int:
    m = serialize.load_model(args.model)
    kind = _model_kind(m)
    if kind not in _CHECK_MODELS[args.check]:
        raise UsageError(f"--check {args.check} needs a {' or '.join(_CHECK_MODELS[args.check])} model, got {kind}")
    faulty = _ids(args.faulty or "")
    doc: dict = {"check": args.check, "model": kind}
    text: list = []
    if args.check == "q3":
        ok, w = bridges.q3_check(m)
        doc.update(holds=ok, witness=None if w is None else [sorted(x) for x in w])
        text.append(f"Q3 holds: {str(ok).lower()}" + ("" if w is None else f"; covering triple {_fam(w)}"))
    elif args.check == "thm1":
        r = bridges.q3_equivalence_harness(m, args.capacity)
        ok = r.agree
        doc.update(q3=r.condition, league=r.league, agreement=r.agree)
        text.append(f"q3={str(r.condition).lower()} league={str(r.league).lower()} agreement={str(r.agree).lower()}")
    elif args.check == "b3":
        ok, w = bridges.b3_check(m)
        doc.update(holds=ok)
        if w is not None:
            i, j, fi, fj, fij = w
            doc["witness"] = {"i": i, "j": j, "F_i": sorted(fi), "F_j": sorted(fj), "F_ij": sorted(fij)}
            text.append(f"B3 holds: false; {i},{j}: {fmt_set(fi)} ∪ {fmt_set(fj)} ∪ {fmt_set(fij)} covers the universe")
        else:
            text.append("B3 holds: true")
    elif args.check == "thm2":
        r = bridges.b3_league_harness(m, args.capacity)
        ok = r.implication_holds
        doc.update(b3=r.b3, tolerates_some=r.tolerates_some, league=r.league)
        doc.update(league_guild_function=r.league_guild_function, implication_holds=ok)
        text.append(
            f"b3={str(r.b3).lower()} tolerates_some={str(r.tolerates_some).lower()} "
            f"league={str(r.league).lower()} guild-function league={str(r.league_guild_function).lower()}"
        )
    elif args.check == "guild":
        g = bridges.guild_and_wise(m, faulty)
        report = LeagueAnalyzer(bridges.g_embed(m), args.capacity).is_league(g.guild) if g.guild else None
        ok = report is None or report.is_league
        doc.update(wise=sorted(g.wise), naive=sorted(g.naive), guild=sorted(g.guild), guild_is_league=ok)
        text.append(f"wise={fmt_set(g.wise)} naive={fmt_set(g.naive)} guild={fmt_set(g.guild)} league={str(ok).lower()}")
    else:
        target = _ids(args.set) if args.set else None
        if args.check == "cluster" and isinstance(m, bridges.PbqsSystem):
            target = target if target is not None else m.universe - faulty
            res = bridges.pbqs_cluster_check(m, target, faulty)
        else:
            f = _as_pfps(m)
            target = target if target is not None else f.universe - faulty
            fn = bridges.intact_check if args.check == "intact" else bridges.consensus_cluster_check
            try:
                res = fn(target, f, faulty)
            except ContractError as exc:
                raise UsageError(str(exc)) from exc
        ok = res.ok
        doc.update(set=sorted(target), faulty=sorted(faulty), holds=ok)
        if res.witness is not None:
            doc["witness"] = [sorted(x) if isinstance(x, frozenset) else x for x in res.witness]
        text.append(f"{args.check} {fmt_set(target)} with A={fmt_set(faulty)}: {str(ok).lower()}")
        if res.witness is not None:
            text.append(f"  witness: {doc['witness']}")
        if res.note:
            text.append(f"  note: {res.note}")
    _emit(args, doc, text)
    return EXIT_OK if ok else EXIT_FAIL


# --- fuzz ----------------------------------------------------------------------


def cmd_fuzz(args) -> int:
    if args.processes > args.oracle_bound:
        raise UsageError(f"--processes {args.processes} exceeds the oracle bound {args.oracle_bound}")
    if args.oracle_bound > ORACLE_BOUND:
        print(f"warning: oracle bound {args.oracle_bound} above {ORACLE_BOUND}; enumeration cost grows as 4^n", file=sys.stderr)
    props = [p for p in (args.properties or "").split(",") if p] or None
    if props:
        unknown = [p for p in props if p not in PROPERTIES]
        if unknown:
            raise UsageError(f"unknown properties {unknown}; choose from {','.join(PROPERTIES)}")
    out_dir = Path(args.out)

    def persist(cx) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        doc = {**serialize.pfps_to_json(cx.pfps), "property": cx.prop, "details": cx.details}
        (out_dir / f"{cx.prop}-{args.seed}-{cx.instance}.json").write_text(serialize.dumps(doc), encoding="utf-8")

    report = fuzz(args.processes, args.instances, args.seed, props, persist)
    doc = {
        "instances": report.instances,
        "checks": report.checks,
        "counterexamples": [{"property": c.prop, "instance": c.instance, "details": c.details} for c in report.counterexamples],
    }
    text = [f"{report.instances} instance(s); checks: " + ", ".join(f"{k}={v}" for k, v in report.checks.items())]
    text += [f"counterexample {c.prop} #{c.instance}: {c.details[0]}" for c in report.counterexamples]
    text.append(f"{len(report.counterexamples)} counterexample(s)")
    _emit(args, doc, text)
    return EXIT_OK if report.ok else EXIT_FAIL


# --- entry point ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quorumlace", description="Permissionless quorum systems: analysis, simulation, comparison.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="print a JSON report instead of text")
        p.add_argument("--capacity", type=int, default=None, help="exhaustive-search bound (default 20, or QUORUMLACE_CAPACITY)")

    a = sub.add_parser("analyze", help="slices, survivor sets, quorums, tolerated sets and league checks")
    a.add_argument("config")
    a.add_argument("--league", help="comma-separated ids, or all-maximal")
    a.add_argument("--show", help=f"comma-separated subset of {','.join(SHOW_CHOICES)}")
    common(a)

    s = sub.add_parser("simulate", help="run the broadcast or register protocol and check the trace")
    s.add_argument("config")
    s.add_argument("--protocol", choices=("broadcast", "register"), required=True)
    s.add_argument("--league", help="comma-separated ids (default: the config's league, else everyone)")
    s.add_argument("--sender", help="broadcast sender (default: first id)")
    s.add_argument("--writer", help="register writer (default: first id)")
    s.add_argument("--value", default="v", help="broadcast or default written value")
    s.add_argument("--script", help="register script such as w:a,r:p3,&r:p1")
    s.add_argument("--faulty", help="p1:lie-empty,p4:equivocate,p3:crash@5,p2:mute,...")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sweep", type=int, default=0, help="run this many consecutive seeds")
    s.add_argument("--trace", help="trace output file (a directory with --sweep; only failing runs are written)")
    s.add_argument("--max-steps", type=int, default=100_000)
    s.add_argument("--adversarial", help="delay every message of this process")
    s.add_argument("--force", action="store_true", help="run even when the faulty set is not tolerated")
    common(s)

    c = sub.add_parser("compare", help="checks and equivalence harnesses for other trust models")
    c.add_argument("model")
    c.add_argument("--check", choices=tuple(_CHECK_MODELS), required=True)
    c.add_argument("--faulty", help="actual faulty set for guild, intact and cluster checks")
    c.add_argument("--set", help="candidate set for intact and cluster checks (default: all correct)")
    common(c)

    z = sub.add_parser("fuzz", help="cross-check properties against the subset-enumeration oracle")
    z.add_argument("--processes", type=int, default=5)
    z.add_argument("--instances", type=int, default=100)
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--properties", help=f"comma-separated subset of {','.join(PROPERTIES)}")
    z.add_argument("--oracle-bound", type=int, default=ORACLE_BOUND)
    z.add_argument("--out", default="quorumlace-counterexamples", help="directory for counterexample instances")
    common(z)
    return ap


COMMANDS = {"analyze": cmd_analyze, "simulate": cmd_simulate, "compare": cmd_compare, "fuzz": cmd_fuzz}


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    warnings.simplefilter("default")
    try:
        return COMMANDS[args.command](args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""JSON encoding of configurations, model files and reports.

Every document carries ``"format": 1``.  Process ids are emitted as sorted
arrays and families in canonical order, so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from pathlib import Path
from typing import Any, Optional

from .bridges import AsymmetricSystem, FbasSystem, PbqsSystem, SymmetricSystem
from .model import ConfigError, Pfps, normalize_config, set_key

FORMAT = 1
MODEL_KINDS = ("symmetric", "asymmetric", "fbas", "pbqs", "pfps")


class InputError(ConfigError):
    """A config or model file that cannot be used, with the offending location."""


def ids(s: Iterable[str]) -> list:
    return sorted(s)


def family(fam: Iterable[Iterable[str]]) -> list:
    return [sorted(x) for x in sorted((frozenset(x) for x in fam), key=set_key)]


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def pfps_to_json(f: Pfps, league: Optional[Iterable[str]] = None) -> dict:
    doc: dict = {"format": FORMAT, "processes": {}}
    for p in sorted(f.universe):
        c = f.config(p)
        doc["processes"][p] = {"trusted": ids(c.trusted), "fail_prone": family(c.fail_prone)}
    if league is not None:
        doc["league"] = ids(league)
    return doc


def _read_json(path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    fmt = doc.get("format", FORMAT)
    if fmt != FORMAT:
        raise InputError(f"{path}: unsupported format {fmt!r}, expected {FORMAT}")
    return doc


def _id_list(raw: Any, where: str) -> list:
    if not isinstance(raw, list) or not all(isinstance(x, str) and x for x in raw):
        raise InputError(f"{where}: expected an array of process ids")
    return raw


def _family(raw: Any, where: str) -> list:
    if not isinstance(raw, list):
        raise InputError(f"{where}: expected an array of arrays of process ids")
    return [_id_list(x, f"{where}[{i}]") for i, x in enumerate(raw)]


def _per_process(doc: Mapping, key: str, path) -> dict:
    raw = doc.get(key)
    if not isinstance(raw, dict) or not raw:
        raise InputError(f"{path}: field {key!r} must be a non-empty object keyed by process id")
    return raw


def pfps_from_json(doc: Mapping, path: Any = "<config>") -> tuple:
    """``(Pfps, league or None)`` from a parsed config document."""
    configs = {}
    for p, entry in sorted(_per_process(doc, "processes", path).items()):
        where = f"{path}: processes.{p}"
        if not isinstance(entry, dict):
            raise InputError(f"{where}: expected an object with 'trusted' and 'fail_prone'")
        for field in ("trusted", "fail_prone"):
            if field not in entry:
                raise InputError(f"{where}: missing field {field!r}")
        trusted = _id_list(entry["trusted"], f"{where}.trusted")
        fail_prone = _family(entry["fail_prone"], f"{where}.fail_prone")
        try:
            configs[p] = normalize_config(trusted, fail_prone)
        except ConfigError as exc:
            raise InputError(f"{where}: {exc}") from exc
    try:
        f = Pfps(configs)
    except ConfigError as exc:
        raise InputError(f"{path}: {exc}") from exc
    league = None
    if "league" in doc:
        league = frozenset(_id_list(doc["league"], f"{path}: league"))
        if not league <= f.universe:
            raise InputError(f"{path}: league mentions unknown processes {sorted(league - f.universe)}")
    return f, league


def load_config(path) -> tuple:
    return pfps_from_json(_read_json(path), path)


def model_from_json(doc: Mapping, path: Any = "<model>"):
    kind = doc.get("model")
    if kind not in MODEL_KINDS:
        raise InputError(f"{path}: field 'model' must be one of {list(MODEL_KINDS)}, got {kind!r}")
    try:
        if kind == "symmetric":
            return SymmetricSystem.make(
                _id_list(doc.get("universe"), f"{path}: universe"), _family(doc.get("fail_prone"), f"{path}: fail_prone")
            )
        if kind == "asymmetric":
            systems = {
                p: _family(fs, f"{path}: fail_prone.{p}") for p, fs in _per_process(doc, "fail_prone", path).items()
            }
            return AsymmetricSystem.make(_id_list(doc.get("universe"), f"{path}: universe"), systems)
        if kind == "fbas":
            procs = _per_process(doc, "processes", path)
            known = {p: _id_list(e.get("known"), f"{path}: processes.{p}.known") for p, e in procs.items()}
            slices = {p: _family(e.get("slices"), f"{path}: processes.{p}.slices") for p, e in procs.items()}
            return FbasSystem.make(known, slices)
        if kind == "pbqs":
            quorums = {p: _family(q, f"{path}: quorums.{p}") for p, q in _per_process(doc, "quorums", path).items()}
            return PbqsSystem.make(quorums)
        return pfps_from_json(doc, path)[0]
    except InputError:
        raise
    except ConfigError as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_model(path):
    return model_from_json(_read_json(path), path)


def model_to_json(m) -> dict:
    if isinstance(m, SymmetricSystem):
        return {"format": FORMAT, "model": "symmetric", "universe": ids(m.universe), "fail_prone": family(m.fail_prone)}
    if isinstance(m, AsymmetricSystem):
        return {
            "format": FORMAT,
            "model": "asymmetric",
            "universe": ids(m.universe),
            "fail_prone": {p: family(m.systems[p]) for p in sorted(m.systems)},
        }
    if isinstance(m, FbasSystem):
        return {
            "format": FORMAT,
            "model": "fbas",
            "processes": {p: {"known": ids(m.known[p]), "slices": family(m.slices[p])} for p in sorted(m.universe)},
        }
    if isinstance(m, PbqsSystem):
        return {"format": FORMAT, "model": "pbqs", "quorums": {p: family(m.quorums[p]) for p in sorted(m.quorums)}}
    if isinstance(m, Pfps):
        return {"model": "pfps", **pfps_to_json(m)}
    raise TypeError(f"cannot encode {type(m).__name__}")


def league_report_to_json(report) -> dict:
    doc = {
        "candidate": ids(report.candidate),
        "is_league": report.is_league,
        "consistent": report.consistent,
        "available": report.available,
        "tolerated": family(report.tolerated),
    }
    cw, aw = report.consistency_witness, report.availability_witness
    if cw is not None:
        doc["consistency_witness"] = {
            "t": ids(cw.t),
            "root_i": cw.root_i,
            "root_j": cw.root_j,
            "set_i": ids(cw.set_i),
            "set_j": ids(cw.set_j),
        }
    if aw is not None:
        doc["availability_witness"] = {"t": ids(aw.t), "process": aw.process}
    return doc
